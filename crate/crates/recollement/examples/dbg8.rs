use recollement::fincat::{col2, row2, FormalSum};
use recollement::inflation::*;
use recollement::stable::Triangle;

fn main() {
    let p = 3usize; let q = 3u32;
    let inst = build_inflation_category(p, q, 7, &ClosureBounds::for_p(p)).unwrap();
    let built = build_recollement(&inst).unwrap();
    let rec = &built.rec;
    let t = &rec.t;
    for (sb, name) in [(1i32, "paper (-eps)"), (-1, "flipped (+eps)")] {
        let mut all1 = true;
        for x in 0..t.num_skel() {
            let jx = rec.j.table.obj_map[x].clone();
            let v = rec.j_lambda.table.apply_obj(&jx);
            let iirx = rec.ii_rho().obj_map[x].clone();
            let iirv = rec.ii_rho().apply_obj(&v);
            let iirphi = rec.i.table.apply_mor(&rec.tp.cat, &t.cat,
                &rec.i_rho.table.apply_mor(&t.cat, &rec.tp.cat, &rec.phi.components[x]));
            let eps_v = rec.eps.at(&t.cat, &v);
            let bot = if sb == 1 { t.cat.neg(&eps_v) } else { eps_v.clone() };
            let tri = Triangle {
                x: iirv.clone(), y: iirx.concat(&v), z: FormalSum::single(x),
                f: col2(&t.cat, &iirphi, &bot),
                g: row2(&t.cat, &rec.eps.components[x], &rec.phi.components[x]),
                h: rec.compat_lhs(x),
            };
            let ok = t.check_exact(&tri, true).unwrap().passed();
            if !ok { all1 = false; }
        }
        println!("tri1 {name}: all objects pass = {all1}");
    }
    // second triangle: components (psi; -eta), (m_a, m_b), -Sigma(phi . eps_v)
    for (se, sma, sh, name) in [
        (1i32, 1i32, 1i32, "paper"),
        (-1, 1, 1, "+eta"),
        (1, -1, 1, "-m_a flipped"),
        (1, 1, -1, "+Sigma(..)"),
        (-1, -1, 1, "+eta, -m_a"),
        (-1, 1, -1, "+eta, +Sigma"),
        (1, -1, -1, "-m_a, +Sigma"),
    ] {
        let mut all2 = true;
        for x in 0..t.num_skel() {
            let jx = rec.j.table.obj_map[x].clone();
            let v = rec.j_lambda.table.apply_obj(&jx);
            let iirv = rec.ii_rho().apply_obj(&v);
            let iilx = rec.ii_lambda().obj_map[x].clone();
            let jrjx = rec.jr_j().obj_map[x].clone();
            let eps_v = rec.eps.at(&t.cat, &v);
            let m_a0 = {
                let r2 = rec.i.table.apply_mor(&rec.tp.cat, &t.cat,
                    &rec.eps_p.at(&rec.tp.cat, &rec.i_lambda.table.obj_map[x]));
                let r3 = rec.compat_rhs_tail_pub(x);
                t.cat.neg(&t.cat.then(&r2, &r3))
            };
            let m_a = if sma == 1 { m_a0.clone() } else { t.cat.neg(&m_a0) };
            let m_b = {
                let l2 = rec.j_rho.table.apply_mor(&rec.tpp.cat, &t.cat,
                    &rec.phi_p.at(&rec.tpp.cat, &jx));
                let l3 = rec.delta.at(&t.cat, &v);
                t.cat.then(&l2, &l3)
            };
            let eta_c = if se == 1 { t.cat.neg(&rec.eta.components[x]) } else { rec.eta.components[x].clone() };
            let h0 = t.sigma.apply_mor(&t.cat, &t.cat, &t.cat.then(&eps_v, &rec.phi.components[x]));
            let h = if sh == 1 { t.cat.neg(&h0) } else { h0 };
            let tri = Triangle {
                x: FormalSum::single(x), y: iilx.concat(&jrjx), z: t.sigma.apply_obj(&iirv),
                f: col2(&t.cat, &rec.psi.components[x], &eta_c),
                g: row2(&t.cat, &m_a, &m_b),
                h,
            };
            if !t.check_exact(&tri, true).unwrap().passed() { all2 = false; }
        }
        println!("tri2 {name}: all pass = {all2}");
    }
}
