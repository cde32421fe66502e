//! Smith normal form of a small matrix and integral homology of RP^2.

use gysin::corpus::rp2;
use gysin::exactlin::{snf, subquotient, IntMatrix, Ring};

fn main() {
    let a = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
    let s = snf(&a);
    println!("invariant factors of [[2,4],[6,8]]: {:?}", s.invariant_factors());
    assert_eq!(s.u.mul(&a).mul(&s.v), s.s);

    let q = subquotient(&IntMatrix::identity(2), &IntMatrix::from_i64(2, 2, &[2, 0, 0, 3])).unwrap();
    println!("Z^2 / (2Z + 3Z) = {q}");

    for ring in [Ring::Integers, Ring::Rationals, Ring::PrimeField(2)] {
        println!("RP^2 over {ring}: {}", rp2(ring).homology_table());
    }
}
