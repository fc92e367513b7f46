use recollement::inflation::*;
fn main() {
    match build_inflation_category(2, 2, 7, &ClosureBounds::for_p(2)) {
        Ok(i) => println!("ok: window {} skel {}", i.t1.window.len(), i.t1.num_skel()),
        Err(e) => println!("ERR: {e}"),
    }
}
