use recollement::auslander::*;
use recollement::comma::CommaBounds;
use recollement::inflation::build_stable_module_cat;
use std::rc::Rc;

fn main() {
    let t0 = std::time::Instant::now();
    let u = Rc::new(build_stable_module_cat(3, 2, 11).unwrap());
    eprintln!("u built {:?}", t0.elapsed());
    let bounds = CommaBounds { max_sum_len: 2, enum_cap: 1 << 12 };
    let (mc, core) = morcat_closed_window(&u, &bounds, 11).unwrap();
    eprintln!("morcat {} objects core {} {:?}", mc.objects.len(), core, t0.elapsed());
}
