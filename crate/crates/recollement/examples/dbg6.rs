use recollement::inflation::*;
use recollement::recollement::all_pass;

fn main() {
    for (p, q) in [(2usize, 2u32), (3, 2), (3, 3)] {
        let t0 = std::time::Instant::now();
        let inst = build_inflation_category(p, q, 7, &ClosureBounds::for_p(p)).unwrap();
        let built = build_recollement(&inst).unwrap();
        let rec = &built.rec;
        let (norm, nc) = rec.derive_norm().unwrap();
        let (_conorm, cc) = rec.derive_conorm().unwrap();
        let (_xi, xc) = match rec.derive_intertwining(&norm) {
            Ok(v) => v,
            Err(e) => { println!("p={p} q={q} XI ERR: {e}"); continue; }
        };
        let comp = rec.verify_compatibility().unwrap();
        let mv = rec.mayer_vietoris().unwrap();
        let all: Vec<_> = nc.iter().chain(&cc).chain(&xc).chain(&comp).chain(&mv).collect();
        for c in &all {
            if !c.pass { println!("p={p} q={q} FAIL: {} -- {}", c.name, c.detail); }
        }
        println!("p={p} q={q}: {} derived checks, all pass = {} ({:?})",
            all.len(), all.iter().all(|c| c.pass), t0.elapsed());
    }
}
