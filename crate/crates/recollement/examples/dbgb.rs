use recollement::auslander::*;
use recollement::algebra::preprojective_algebra_a;
use recollement::inflation::build_stable_module_cat;
use std::rc::Rc;

fn main() {
    let u = Rc::new(build_stable_module_cat(3, 2, 11).unwrap());
    let _aus = stable_auslander(&u, 3).unwrap();
    let pi = preprojective_algebra_a(2, 2).unwrap();
    match enumerate_indecomposables(&pi, 3, 6, 11) {
        Ok(ms) => {
            println!("indecs: {}", ms.len());
            for m in &ms { println!("  dim {}", m.dim); }
        }
        Err(e) => println!("ENUM ERR: {e}"),
    }
}
