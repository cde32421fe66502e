//! Pages of the spectral sequence of a random filtered complex.

use gysin::corpus::{prng, random_filtered_complex};
use gysin::exactlin::Ring;

fn main() {
    let fc = random_filtered_complex(&mut prng(11), 10, 3, Ring::Integers);
    let sp = fc.spectral_pages(fc.r_infinity() + 1).unwrap();
    print!("{}", sp.table());
    sp.check_recursion().unwrap();
    sp.check_convergence().unwrap();
    println!("pages agree with homology of the total complex");
}
