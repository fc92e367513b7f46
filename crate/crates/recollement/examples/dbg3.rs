use recollement::algebra::*;
use recollement::backend::*;
use recollement::fq::FqMatrix;
use recollement::inflation::jordan_module;
use recollement::modops;

fn main() {
    let alg = truncated_polynomial_algebra(2, 2).unwrap();
    let be = Backend::inflation_cat(alg.clone(), 7).unwrap();
    let q = 2u32;
    let mut objs = vec![];
    for b in 1..=2usize {
        let m = jordan_module(&alg, b);
        objs.push(be.make_inf(m.clone(), m.clone(), FqMatrix::identity(q, b)).unwrap());
        let (qm, e) = be.hull_module(&m).unwrap();
        objs.push(be.make_inf(m.clone(), qm, e).unwrap());
        objs.push(be.make_inf(Module::zero(&alg), m.clone(), FqMatrix::zeros(q, 0, b)).unwrap());
    }
    for (xi, x) in objs.iter().enumerate() {
        for (yi, y) in objs.iter().enumerate() {
            let rx = Rep::Inf(x.clone());
            let ry = Rep::Inf(y.clone());
            let basis = be.hom_basis_mor(&rx, &ry).unwrap();
            if basis.is_empty() { continue; }
            let mut cands = vec![];
            modops::enumerate_coeffs(q, basis.len(), |coeffs| {
                let mut m = be.zero_mor(&rx, &ry);
                for (k, &c) in coeffs.iter().enumerate() {
                    if c != 0 { m = be.add_mor(&m, &be.scale_mor(&basis[k], c)); }
                }
                cands.push(m);
                false
            });
            for f in cands {
                if be.is_zero_mor(&f) { continue; }
                let (qx, e) = be.hull(&rx).unwrap();
                let (qy2, injs, _) = be.direct_sum(&[&qx, &ry]);
                let m = be.add_mor(&be.then(&e, &injs[0]), &be.then(&be.neg_mor(&f), &injs[1]));
                if !be.is_inflation(&rx, &qy2, &m).unwrap() { continue; }
                match be.cokernel(&rx, &qy2, &m) {
                    Ok((cone, _)) => match be.decompose(&cone) {
                        Ok(_) => {}
                        Err(e) => { println!("DECOMP ERR at ({xi},{yi}): {e}"); return; }
                    },
                    Err(e) => { println!("COKER ERR at ({xi},{yi}): {e}"); return; }
                }
            }
        }
    }
    println!("all cones fine");
}
