use recollement::fincat::{col2, row2, FormalSum};
use recollement::inflation::*;
use recollement::stable::Triangle;

fn main() {
    let p = 3usize; let q = 3u32;
    let inst = build_inflation_category(p, q, 7, &ClosureBounds::for_p(p)).unwrap();
    let built = build_recollement(&inst).unwrap();
    let rec = &built.rec;
    let t = &rec.t;
    for x in 0..t.num_skel() {
        let jx = rec.j.table.obj_map[x].clone();
        let v = rec.j_lambda.table.apply_obj(&jx);
        let iirx = rec.ii_rho().obj_map[x].clone();
        let iirv = rec.ii_rho().apply_obj(&v);
        let iirphi = rec.i.table.apply_mor(&rec.tp.cat, &t.cat,
            &rec.i_rho.table.apply_mor(&t.cat, &rec.tp.cat, &rec.phi.components[x]));
        let eps_v = rec.eps.at(&t.cat, &v);
        let mut found = vec![];
        for st in [1i32, -1] { for sb in [1i32, -1] { for sh in [1i32, -1] {
            let top = if st == 1 { iirphi.clone() } else { t.cat.neg(&iirphi) };
            let bot = if sb == 1 { t.cat.neg(&eps_v) } else { eps_v.clone() };
            let h0 = rec.compat_lhs(x);
            let h = if sh == 1 { h0.clone() } else { t.cat.neg(&h0) };
            let tri = Triangle {
                x: iirv.clone(), y: iirx.concat(&v), z: FormalSum::single(x),
                f: col2(&t.cat, &top, &bot),
                g: row2(&t.cat, &rec.eps.components[x], &rec.phi.components[x]),
                h,
            };
            if t.check_exact(&tri, true).unwrap().passed() { found.push((st, sb, sh)); }
        }}}
        println!("obj {x}: jx={:?} iirx={:?} passing sign patterns {:?}", jx, iirx, found);
    }
}
