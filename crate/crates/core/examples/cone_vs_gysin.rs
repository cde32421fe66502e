//! Compare the cone sequence with the Gysin sequence on random two-line complexes.

use gysin::corpus::{prng, random_two_line};
use gysin::exactlin::Ring;
use gysin::spectra::check_cone_equals_gysin;

fn main() {
    for seed in 0..5 {
        let t = random_two_line(&mut prng(seed), 10, Ring::Integers);
        let r = check_cone_equals_gysin(&t).unwrap();
        println!(
            "seed {seed}: degrees {:?}, {} identities, {} factorizations",
            r.degrees, r.identities, r.factorizations
        );
    }
}
