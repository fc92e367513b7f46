use recollement::fincat::{col2, row2};
use recollement::inflation::*;
use recollement::stable::Triangle;

fn main() {
    let p = 3usize; let q = 3u32;
    let inst = build_inflation_category(p, q, 7, &ClosureBounds::for_p(p)).unwrap();
    let built = build_recollement(&inst).unwrap();
    let rec = &built.rec;
    let t = &rec.t;
    let x = 0usize;
    let jx = rec.j.table.obj_map[x].clone();
    let v = rec.j_lambda.table.apply_obj(&jx);
    let iirx = rec.ii_rho().obj_map[x].clone();
    let iirv = rec.ii_rho().apply_obj(&v);
    let iirphi = rec.i.table.apply_mor(&rec.tp.cat, &t.cat,
        &rec.i_rho.table.apply_mor(&t.cat, &rec.tp.cat, &rec.phi.components[x]));
    let eps_v = rec.eps.at(&t.cat, &v);
    let h1 = rec.compat_lhs(x);
    println!("jx = {:?}, v = {:?}, iirx = {:?}, iirv = {:?}", jx, v, iirx, iirv);
    for (sa, sb, sc, sd) in [(1,1,1,1),(1,-1,1,1),(-1,1,1,1),(1,1,-1,1),(1,1,1,-1),(-1,-1,1,1),(1,-1,1,-1),(1,1,-1,-1),(1,-1,-1,1),(-1,1,1,-1)] {
        let top = if sa == 1 { iirphi.clone() } else { t.cat.neg(&iirphi) };
        let bot = if sb == 1 { eps_v.clone() } else { t.cat.neg(&eps_v) };
        let g_l = rec.eps.components[x].clone();
        let g_r = if sc == 1 { rec.phi.components[x].clone() } else { t.cat.neg(&rec.phi.components[x]) };
        let h = if sd == 1 { h1.clone() } else { t.cat.neg(&h1) };
        let tri = Triangle {
            x: iirv.clone(),
            y: iirx.concat(&v),
            z: recollement::fincat::FormalSum::single(x),
            f: col2(&t.cat, &top, &bot),
            g: row2(&t.cat, &g_l, &g_r),
            h,
        };
        let rep = t.check_exact(&tri, true).unwrap();
        println!("signs ({sa},{sb},{sc},{sd}): passed = {}", rep.passed());
    }
}
