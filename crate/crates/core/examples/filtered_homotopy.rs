//! Filtered homotopies of order 0 and 1 and the pages on which the maps agree.

use gysin::corpus::{prng, random_homotopy_instance};
use gysin::exactlin::Ring;
use gysin::spectra::{filtered_order, homotopy_page_agreement};

fn main() {
    for order in [0, 1] {
        let h = random_homotopy_instance(&mut prng(7), 10, order, Ring::Integers);
        let o = filtered_order(&h.k, &h.f.source, &h.f.target);
        print!("order {o}:");
        for r in 0..=h.f.source.r_infinity() + 1 {
            let same = homotopy_page_agreement(&h.f, &h.g, &h.k, r).unwrap();
            print!(" E{r}={}", if same { "same" } else { "differ" });
        }
        println!();
    }
}
