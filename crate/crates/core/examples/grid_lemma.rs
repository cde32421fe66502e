//! The 3x3 grid check on a random morphism of short exact sequences.

use gysin::cones::grid_lemma57;
use gysin::corpus::{prng, random_ses_morphism};
use gysin::exactlin::Ring;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let m = random_ses_morphism(&mut prng(seed), 10, Ring::Integers);
    let r = grid_lemma57(&m).unwrap();
    println!("squares checked: {}", r.squares_checked);
    println!("degrees with a nonzero connecting map: {:?}", r.marked_degrees);
    println!("failures: {:?}", r.failures);
}
