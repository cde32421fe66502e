//! The commutative diagram check on a model and dimension deductions from exactness.

use gysin::equivariant::{corollary_certificate, diagram17_check, les_solver, sawc_model, PartialLes};

fn main() {
    let inst = sawc_model(2).unwrap();
    let r = diagram17_check(&inst).unwrap();
    println!("grid failures: {:?}", r.grid.failures);
    let c = corollary_certificate(&inst).unwrap();
    for (name, why) in &c.vanishing {
        println!("{name} vanishes: {}", why.join("; "));
    }

    let names: Vec<String> = ["A", "B"].iter().map(|s| s.to_string()).collect();
    let mut p = PartialLes::blank(&names, &["f".to_string()], true);
    p.slots[0].dim = Some(4);
    let s = les_solver(&p).unwrap();
    println!("0 -> A -> B -> 0 with dim A = 4 gives dims {:?}", s.dims);
}
