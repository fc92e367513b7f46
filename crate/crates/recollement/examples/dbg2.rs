use recollement::algebra::*;
use recollement::backend::*;
use recollement::fq::FqMatrix;
use recollement::inflation::jordan_module;

fn main() {
    let alg = truncated_polynomial_algebra(2, 2).unwrap();
    let be = Backend::inflation_cat(alg.clone(), 7).unwrap();
    let q = 2u32;
    // seeds
    let mut objs = vec![];
    for b in 1..=2usize {
        let m = jordan_module(&alg, b);
        objs.push(be.make_inf(m.clone(), m.clone(), FqMatrix::identity(q, b)).unwrap());
        let (qm, e) = be.hull_module(&m).unwrap();
        objs.push(be.make_inf(m.clone(), qm, e).unwrap());
        objs.push(be.make_inf(Module::zero(&alg), m.clone(), FqMatrix::zeros(q, 0, b)).unwrap());
    }
    println!("seeds: {}", objs.len());
    for (k, o) in objs.iter().enumerate() {
        let r = Rep::Inf(o.clone());
        println!("obj {k}: ({},{})", o.x1.dim, o.x0.dim);
        match be.hull(&r) {
            Ok((qo, e)) => {
                println!("  hull ok ({})", qo.total_dim());
                match be.cokernel(&r, &qo, &e) {
                    Ok((s, _)) => {
                        println!("  coker ok ({})", s.total_dim());
                        match be.decompose(&s) {
                            Ok(parts) => println!("  decompose ok: {} parts", parts.len()),
                            Err(e) => println!("  DECOMP ERR: {e}"),
                        }
                    }
                    Err(e) => println!("  COKER ERR: {e}"),
                }
            }
            Err(e) => println!("  HULL ERR: {e}"),
        }
        match be.cover(&r) {
            Ok((po, c)) => match be.kernel(&po, &r, &c) {
                Ok((kk, _)) => println!("  kernel ok ({})", kk.total_dim()),
                Err(e) => println!("  KERNEL ERR: {e}"),
            },
            Err(e) => println!("  COVER ERR: {e}"),
        }
    }
}
