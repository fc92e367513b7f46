use recollement::auslander::*;
use recollement::comma::{hpt_ideal, CommaBounds};
use recollement::inflation::build_stable_module_cat;
use std::rc::Rc;

fn main() {
    for (p, q) in [(2usize, 2u32), (3, 2), (3, 3)] {
        let t0 = std::time::Instant::now();
        let u = Rc::new(build_stable_module_cat(p, q, 11).unwrap());
        let aus = match stable_auslander(&u, p) {
            Ok(a) => a,
            Err(e) => { println!("p={p} q={q} AUS ERR: {e}"); continue; }
        };
        for c in &aus.checks {
            if !c.pass { println!("p={p} q={q} FAIL {}: {}", c.name, c.detail); }
        }
        println!("p={p} q={q}: lambda dim {} scalars {:?}", aus.lambda.dim(), aus.scalars_used);
        let model = match build_functor_cat_model(u.clone(), aus, 11) {
            Ok(m) => m,
            Err(e) => { println!("  MODEL ERR: {e}"); continue; }
        };
        println!("  lam window: {} modules, stable skel {} ({:?})",
            model.lam_pkg.window.len(), model.lam_pkg.num_skel(), t0.elapsed());
        // morphism category window + extensions with cones and suspensions
        let bounds = CommaBounds { max_sum_len: 2, enum_cap: 1 << 12 };
        let (mc, core) = morcat_closed_window(&u, &bounds, 11).unwrap();
        println!("  morcat: {} objects, core {} ({:?})", mc.objects.len(), core, t0.elapsed());
        let hpt = hpt_ideal(&mc).unwrap();
        let cok = match build_cok_functor(&model, &mc) {
            Ok(c) => c,
            Err(e) => { println!("  COK ERR: {e}"); continue; }
        };
        match verify_cok_square(&model, &mc, core, &hpt, &cok, &u, 11) {
            Ok(checks) => {
                for c in &checks {
                    if !c.pass { println!("  FAIL {}: {}", c.name, c.detail); }
                }
                println!("  cok square: {} checks, all pass = {} ({:?})",
                    checks.len(), checks.iter().all(|c| c.pass), t0.elapsed());
            }
            Err(e) => println!("  SQUARE ERR: {e}"),
        }
    }
}
