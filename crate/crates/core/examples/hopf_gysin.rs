//! The Gysin sequence of the two-line complex modelling S^3 -> S^2.

use gysin::corpus::hopf;
use gysin::exactlin::Ring;

fn main() {
    let t = hopf(Ring::Integers);
    println!("total: {}", t.total().homology_table());
    let g = t.gysin().unwrap();
    print!("{}", g.les.table());
    for (k, d) in &g.d_maps {
        if !d.is_zero() {
            println!("D in degree {k}: {d:?}");
        }
    }
}
