//! Borel homology of a complex with trivial circle action.

use gysin::corpus::rp2;
use gysin::equivariant::borel_trivial_action;
use gysin::exactlin::Ring;

fn main() {
    let n = 3;
    let (_, r) = borel_trivial_action(&rp2(Ring::Integers), n).unwrap();
    for (k, g) in &r.homology {
        println!("H{k} = {g}");
    }
    println!("stable degrees: {:?}", r.stable_degrees);
}
