use recollement::algebra::*;
use recollement::fq::{subspace, FqMatrix};
use recollement::modops;

fn main() {
    let pi = preprojective_algebra_a(2, 2).unwrap();
    println!("labels: {:?}, gens {:?}", pi.labels, pi.generators());
    for (i, w) in pi.basis_words().iter().enumerate() {
        println!("word[{i}] = {:?}", w);
    }
    let pd = modops::projective_data(&pi).unwrap();
    println!("projectives: {:?}", pd.indec_projectives.iter().map(|m| m.dim).collect::<Vec<_>>());
    let parts: Vec<&Module> = pd.indec_projectives.iter().collect();
    let p = Module::direct_sum(&parts);
    let rad = p.radical_rows().unwrap();
    println!("P dim {}, rad rows {}", p.dim, rad.rows());
    // single radical vector closure
    for r in 0..rad.rows() {
        let v = rad.submatrix(&[r], &(0..p.dim).collect::<Vec<_>>());
        let mut span = subspace::canonical(&v);
        loop {
            let mut grew = subspace::canonical(&span);
            for g in pi.generators() {
                let img = span.mul(p.action(*g));
                grew = subspace::sum(&grew, &img);
            }
            if grew == span { break; }
            span = grew;
        }
        println!("closure of rad vec {r}: dim {}", span.rows());
        match p.submodule(&span) {
            Ok(_) => println!("  submodule ok"),
            Err(e) => {
                println!("  SUBMODULE ERR: {e}");
                // check invariance under each basis element
                for b in 0..pi.dim() {
                    let img = span.mul(p.action(b));
                    let ok = (0..img.rows()).all(|rr| {
                        let row = img.submatrix(&[rr], &(0..p.dim).collect::<Vec<_>>());
                        row.is_zero() || subspace::contains(&span, &row)
                    });
                    println!("    invariant under basis {} ({}): {}", b, pi.labels[b], ok);
                }
            }
        }
    }
}
