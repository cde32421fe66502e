//! Every named example, printed as a JSON document.

use gysin::cli::Document;
use gysin::corpus::{generate, ExampleSpec};
use gysin::exactlin::Ring;

fn main() {
    let names = [
        "sphere(2)",
        "cpn(3)",
        "rp2",
        "hopf",
        "morse_bott_hopf",
        "trivial_borel(rp2,2)",
        "random_complex(1,8)",
        "random_two_line(1,8)",
        "random_ses_morphism(1,8)",
        "random_mb_datum(1,8)",
    ];
    for name in names {
        let spec: ExampleSpec = name.parse().unwrap();
        let doc: Document = generate(&spec, Ring::Integers).unwrap().into();
        println!("{spec}: {} ({} bytes)", doc.kind(), doc.to_json().len());
    }
}
