//! Morse-Bott circle data: assembly, the E^1 comparison and the Gysin sequence.

use gysin::corpus::{morse_bott_hopf, prng, random_mb_datum};
use gysin::equivariant::{assemble_morse_bott, gysin_theorem11, phi_e1};
use gysin::exactlin::Ring;

fn main() {
    let d = morse_bott_hopf(Ring::Integers);
    let fc = assemble_morse_bott(&d).unwrap();
    println!("Hopf datum, total: {}", fc.complex().homology_table());
    print!("{}", gysin_theorem11(&d).unwrap().les.table());

    let d = random_mb_datum(&mut prng(5), 8, Ring::Integers);
    let r = phi_e1(&d).unwrap();
    println!("random datum with {} orbits, E^1: {}", d.len(), r.e1.homology_table());
}
