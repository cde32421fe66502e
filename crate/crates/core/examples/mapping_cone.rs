//! The cone of multiplication by 2 on Z and its long exact sequence.

use gysin::complexes::{ChainComplex, ChainMap};
use gysin::cones::{cone, cone_ses, snake_les};
use gysin::exactlin::{IntMatrix, Ring};

fn main() {
    let z = ChainComplex::point(Ring::Integers);
    let two = ChainMap::new(z.clone(), z, 0, [(0, IntMatrix::from_i64(1, 1, &[2]))].into_iter().collect()).unwrap();
    let c = cone(&two).unwrap();
    println!("cone: {}", c.homology_table());

    let ses = cone_ses(&two).unwrap();
    let les = snake_les(&ses).unwrap();
    print!("{}", les.table());
    println!("exact: {}", les.is_exact());
}
