use recollement::algebra::*;
use recollement::backend::*;
use recollement::fq::{subspace, FqMatrix};
use recollement::inflation::jordan_module;
use recollement::modops;

fn is_module_map(x: &Module, y: &Module, m: &FqMatrix) -> bool {
    (0..x.algebra.dim()).all(|g| x.action(g).mul(m) == m.mul(y.action(g)))
}

fn main() {
    let alg = truncated_polynomial_algebra(2, 2).unwrap();
    let be = Backend::inflation_cat(alg.clone(), 7).unwrap();
    let q = 2u32;
    let m1 = jordan_module(&alg, 1);
    let (qm, e) = be.hull_module(&m1).unwrap();
    let x = be.make_inf(m1.clone(), qm, e).unwrap();
    println!("x = ({},{}), f = {:?}", x.x1.dim, x.x0.dim, x.f);
    let rx = Rep::Inf(x.clone());
    let basis = be.hom_basis_mor(&rx, &rx).unwrap();
    println!("end dim {}", basis.len());
    for b in &basis {
        let bi = b.as_inf();
        println!("a1 {:?} a0 {:?}", bi.a1, bi.a0);
        println!("  a1 mod map: {}", is_module_map(&x.x1, &x.x1, &bi.a1));
        println!("  a0 mod map: {}", is_module_map(&x.x0, &x.x0, &bi.a0));
        println!("  intertwine: {}", x.f.mul(&bi.a0) == bi.a1.mul(&x.f));
    }
    let mut cands = vec![];
    modops::enumerate_coeffs(q, basis.len(), |coeffs| {
        let mut m = be.zero_mor(&rx, &rx);
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0 { m = be.add_mor(&m, &be.scale_mor(&basis[k], c)); }
        }
        cands.push(m);
        false
    });
    for f in cands {
        if be.is_zero_mor(&f) { continue; }
        let (qx, em) = be.hull(&rx).unwrap();
        let (qy2, injs, _) = be.direct_sum(&[&qx, &rx]);
        let m = be.add_mor(&be.then(&em, &injs[0]), &be.then(&be.neg_mor(&f), &injs[1]));
        if !be.is_inflation(&rx, &qy2, &m).unwrap() { continue; }
        let mi = m.as_inf();
        let qi = qy2.as_inf();
        println!("--- cone candidate: a1 {:?} a0 {:?}", mi.a1, mi.a0);
        println!("  a1 mod map {}", is_module_map(&x.x1, &qi.x1, &mi.a1));
        println!("  a0 mod map {}", is_module_map(&x.x0, &qi.x0, &mi.a0));
        println!("  intertwine {}", x.f.mul(&mi.a0) == mi.a1.mul(&qi.f));
        // check invariance of images
        let im0 = mi.a0.row_space();
        let img = im0.mul(qi.x0.action(1));
        println!("  im(a0) t-invariant: {}", subspace::contains(&im0, &img.row_space()) || img.is_zero());
        match be.cokernel(&rx, &qy2, &m) {
            Ok(_) => println!("  coker ok"),
            Err(e) => { println!("  COKER ERR {e}"); }
        }
    }
}
