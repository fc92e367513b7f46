use recollement::inflation::*;

fn main() {
    for (p, q) in [(2usize, 2u32), (2, 3), (3, 2), (3, 3)] {
        let t0 = std::time::Instant::now();
        let inst = build_inflation_category(p, q, 7, &ClosureBounds::for_p(p)).unwrap();
        println!("p={p} q={q}: window {} skel {} ({:?})", inst.t1.window.len(), inst.t1.num_skel(), t0.elapsed());
        let built = match build_recollement(&inst) {
            Ok(b) => b,
            Err(e) => { println!("  BUILD ERR: {e}"); continue; }
        };
        match built.rec.validate() {
            Ok(checks) => {
                for c in &checks {
                    if !c.pass {
                        println!("  FAIL {} -- {}", c.name, c.detail);
                    }
                }
                println!("  {} checks, all pass: {} ({:?})", checks.len(), checks.iter().all(|c| c.pass), t0.elapsed());
            }
            Err(e) => println!("  VALIDATE ERR: {e}"),
        }
    }
}
