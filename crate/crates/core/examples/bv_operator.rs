//! The degree-one operator on the total complex of a Morse-Bott datum,
//! checked against M E on homology.

use gysin::corpus::morse_bott_hopf;
use gysin::equivariant::{bv_delta, MorseBottS1Datum, Orbit};
use gysin::exactlin::Ring;

fn show(name: &str, d: &MorseBottS1Datum) {
    let r = bv_delta(d).unwrap();
    println!("{name}: compared with M E in degrees {:?}", r.degrees);
    for (k, m) in &r.induced {
        if !m.is_zero() {
            println!("  H{k} -> H{}: {m:?}", k + 1);
        }
    }
}

fn main() {
    // two fixed orbits and no differentials: the operator is nonzero
    let split = MorseBottS1Datum::new(Ring::Integers, vec![Orbit::new(0), Orbit::new(2)], vec![], vec![]).unwrap();
    show("split", &split);
    // free action on S^3: vanishes on homology
    show("hopf", &morse_bott_hopf(Ring::Integers));
}
