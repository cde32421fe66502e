//! Named example objects and seeded random generators.
//!
//! A spec string such as `hopf`, `cpn(3)`, `trivial_borel(rp2,2)` or
//! `random_two_line(7,6)` names one object; [`generate`] builds it. Random
//! specs take `(seed, size)` and are reproducible: the same pair always gives
//! the same object.

pub mod random;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::complexes::{ChainComplex, ChainMap};
use crate::cones::SesMorphism;
use crate::equivariant::{borel_two_line, cpn_complex, MorseBottS1Datum, Orbit};
use crate::error::{Error, Result};
use crate::exactlin::{IntMatrix, Ring};
use crate::spectra::TwoLineComplex;

pub use random::{
    prng, random_chain_map, random_complex, random_complex_with_basis, random_filtered_complex,
    random_filtered_equivalence, random_homotopy_instance, random_map_between, random_mb_datum,
    random_ses_morphism, random_two_line, ComplexParams, HomotopyInstance, Prng, RandomComplex, ENTRY_BOUND,
};

/// Cellular complex of `S^n` (two points for `n = 0`).
pub fn sphere(ring: Ring, n: usize) -> ChainComplex {
    if n == 0 {
        return ChainComplex::with_zero_differential(ring, 0, vec![2]);
    }
    let mut ranks = vec![0; n + 1];
    ranks[0] = 1;
    ranks[n] = 1;
    ChainComplex::with_zero_differential(ring, 0, ranks)
}

/// Cellular complex of `RP^2`: `d_2 = 2`, `d_1 = 0`.
pub fn rp2(ring: Ring) -> ChainComplex {
    ChainComplex::from_diffs(
        ring,
        0,
        vec![1, 1, 1],
        vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 1), IntMatrix::from_i64(1, 1, &[2])],
    )
    .expect("d^2 = 0")
}

/// The Hopf fibration as a two-line complex: `A = A' = S^2` and `f` the
/// Euler class, an isomorphism `A_2 -> A'_0`.
pub fn hopf(ring: Ring) -> TwoLineComplex {
    let s2 = sphere(ring, 2);
    let mut mats = std::collections::BTreeMap::new();
    mats.insert(2, IntMatrix::from_i64(1, 1, &[1]));
    TwoLineComplex::new(ChainMap::new(s2.clone(), s2, -2, mats).expect("chain map")).expect("shift -2")
}

/// Morse-Bott datum of the rotation of `S^3` with quotient `S^2`: two
/// orbits of weight 2 and 0, no `D1`, and `D2` connecting them.
pub fn morse_bott_hopf(ring: Ring) -> MorseBottS1Datum {
    MorseBottS1Datum::new(
        ring,
        vec![Orbit::new(2), Orbit::new(0)],
        Vec::new(),
        vec![(1, 0, BigInt::from(1))],
    )
    .expect("valid datum")
}

/// A named example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExampleSpec {
    Sphere(usize),
    Cpn(usize),
    Rp2,
    Hopf,
    MorseBottHopf,
    TrivialBorel { inner: Box<ExampleSpec>, n: usize },
    RandomComplex { seed: u64, size: usize },
    RandomTwoLine { seed: u64, size: usize },
    RandomSesMorphism { seed: u64, size: usize },
    RandomMbDatum { seed: u64, size: usize },
}

/// The names accepted by [`ExampleSpec::from_str`], with their arguments.
pub const EXAMPLE_NAMES: &[&str] = &[
    "sphere(n)",
    "cpn(n)",
    "rp2",
    "hopf",
    "morse_bott_hopf",
    "trivial_borel(inner,n)",
    "random_complex(seed,size)",
    "random_two_line(seed,size)",
    "random_ses_morphism(seed,size)",
    "random_mb_datum(seed,size)",
];

impl ExampleSpec {
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            ExampleSpec::RandomComplex { .. }
                | ExampleSpec::RandomTwoLine { .. }
                | ExampleSpec::RandomSesMorphism { .. }
                | ExampleSpec::RandomMbDatum { .. }
        )
    }

    /// Replaces the seed and size of a random spec.
    pub fn with_seed_size(self, seed: Option<u64>, size: Option<usize>) -> Self {
        let pick = |s: u64, z: usize| (seed.unwrap_or(s), size.unwrap_or(z));
        match self {
            ExampleSpec::RandomComplex { seed: s, size: z } => {
                let (seed, size) = pick(s, z);
                ExampleSpec::RandomComplex { seed, size }
            }
            ExampleSpec::RandomTwoLine { seed: s, size: z } => {
                let (seed, size) = pick(s, z);
                ExampleSpec::RandomTwoLine { seed, size }
            }
            ExampleSpec::RandomSesMorphism { seed: s, size: z } => {
                let (seed, size) = pick(s, z);
                ExampleSpec::RandomSesMorphism { seed, size }
            }
            ExampleSpec::RandomMbDatum { seed: s, size: z } => {
                let (seed, size) = pick(s, z);
                ExampleSpec::RandomMbDatum { seed, size }
            }
            other => other,
        }
    }
}

impl fmt::Display for ExampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleSpec::Sphere(n) => write!(f, "sphere({n})"),
            ExampleSpec::Cpn(n) => write!(f, "cpn({n})"),
            ExampleSpec::Rp2 => write!(f, "rp2"),
            ExampleSpec::Hopf => write!(f, "hopf"),
            ExampleSpec::MorseBottHopf => write!(f, "morse_bott_hopf"),
            ExampleSpec::TrivialBorel { inner, n } => write!(f, "trivial_borel({inner},{n})"),
            ExampleSpec::RandomComplex { seed, size } => write!(f, "random_complex({seed},{size})"),
            ExampleSpec::RandomTwoLine { seed, size } => write!(f, "random_two_line({seed},{size})"),
            ExampleSpec::RandomSesMorphism { seed, size } => write!(f, "random_ses_morphism({seed},{size})"),
            ExampleSpec::RandomMbDatum { seed, size } => write!(f, "random_mb_datum({seed},{size})"),
        }
    }
}

fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

impl FromStr for ExampleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: String| Error::BadParams(msg);
        let (name, args) = match s.find('(') {
            Some(i) => {
                if !s.ends_with(')') {
                    return Err(bad(format!("unbalanced parentheses in '{s}'")));
                }
                (&s[..i], split_args(&s[i + 1..s.len() - 1]))
            }
            None => (s, Vec::new()),
        };
        let name = name.trim().replace('-', "_");
        let want = |n: usize| -> Result<()> {
            let got = args.iter().filter(|a| !a.is_empty()).count();
            if got == n {
                Ok(())
            } else {
                Err(bad(format!("{name} takes {n} argument(s), got {got}")))
            }
        };
        let num = |i: usize| -> Result<u64> {
            args[i]
                .parse::<u64>()
                .map_err(|_| bad(format!("argument '{}' of {name} is not a non-negative integer", args[i])))
        };
        let seed_size = || -> Result<(u64, usize)> {
            // a bare name gets seed 0 and size 8
            if args.iter().all(|a| a.is_empty()) {
                return Ok((0, 8));
            }
            want(2)?;
            Ok((num(0)?, num(1)? as usize))
        };
        Ok(match name.as_str() {
            "sphere" => {
                want(1)?;
                ExampleSpec::Sphere(num(0)? as usize)
            }
            "cpn" => {
                want(1)?;
                ExampleSpec::Cpn(num(0)? as usize)
            }
            "rp2" => ExampleSpec::Rp2,
            "hopf" => ExampleSpec::Hopf,
            "morse_bott_hopf" => ExampleSpec::MorseBottHopf,
            "trivial_borel" => {
                want(2)?;
                ExampleSpec::TrivialBorel {
                    inner: Box::new(args[0].parse()?),
                    n: num(1)? as usize,
                }
            }
            "random_complex" => {
                let (seed, size) = seed_size()?;
                ExampleSpec::RandomComplex { seed, size }
            }
            "random_two_line" => {
                let (seed, size) = seed_size()?;
                ExampleSpec::RandomTwoLine { seed, size }
            }
            "random_ses_morphism" => {
                let (seed, size) = seed_size()?;
                ExampleSpec::RandomSesMorphism { seed, size }
            }
            "random_mb_datum" => {
                let (seed, size) = seed_size()?;
                ExampleSpec::RandomMbDatum { seed, size }
            }
            _ => return Err(bad(format!("unknown example '{name}'; known: {}", EXAMPLE_NAMES.join(", ")))),
        })
    }
}

/// A generated object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Complex(ChainComplex),
    TwoLine(TwoLineComplex),
    SesMorphism(SesMorphism),
    MbDatum(MorseBottS1Datum),
}

impl Generated {
    pub fn kind(&self) -> &'static str {
        match self {
            Generated::Complex(_) => "complex",
            Generated::TwoLine(_) => "two_line",
            Generated::SesMorphism(_) => "ses_morphism",
            Generated::MbDatum(_) => "mb_datum",
        }
    }
}

/// Builds the example over `ring`.
pub fn generate(spec: &ExampleSpec, ring: Ring) -> Result<Generated> {
    ring.validate()?;
    let check_size = |size: usize| {
        if size == 0 {
            Err(Error::BadParams("size must be positive".into()))
        } else {
            Ok(())
        }
    };
    Ok(match spec {
        ExampleSpec::Sphere(n) => Generated::Complex(sphere(ring, *n)),
        ExampleSpec::Cpn(n) => Generated::Complex(cpn_complex(ring, *n)),
        ExampleSpec::Rp2 => Generated::Complex(rp2(ring)),
        ExampleSpec::Hopf => Generated::TwoLine(hopf(ring)),
        ExampleSpec::MorseBottHopf => Generated::MbDatum(morse_bott_hopf(ring)),
        ExampleSpec::TrivialBorel { inner, n } => match generate(inner, ring)? {
            Generated::Complex(c) => Generated::TwoLine(borel_two_line(&c, *n)?),
            other => {
                return Err(Error::BadParams(format!(
                    "trivial_borel needs a complex, '{inner}' is a {}",
                    other.kind()
                )))
            }
        },
        ExampleSpec::RandomComplex { seed, size } => {
            check_size(*size)?;
            Generated::Complex(random_complex(&mut prng(*seed), *size, ring))
        }
        ExampleSpec::RandomTwoLine { seed, size } => {
            check_size(*size)?;
            Generated::TwoLine(random_two_line(&mut prng(*seed), *size, ring))
        }
        ExampleSpec::RandomSesMorphism { seed, size } => {
            check_size(*size)?;
            Generated::SesMorphism(random_ses_morphism(&mut prng(*seed), *size, ring))
        }
        ExampleSpec::RandomMbDatum { seed, size } => {
            check_size(*size)?;
            Generated::MbDatum(random_mb_datum(&mut prng(*seed), *size, ring))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["sphere(3)", "cpn(2)", "rp2", "hopf", "trivial_borel(rp2,2)", "random_two_line(7,6)"] {
            let spec: ExampleSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("sphere".parse::<ExampleSpec>().is_err());
        assert!("nope(1)".parse::<ExampleSpec>().is_err());
        assert_eq!(
            "random_complex".parse::<ExampleSpec>().unwrap().with_seed_size(Some(3), None),
            ExampleSpec::RandomComplex { seed: 3, size: 8 }
        );
    }

    #[test]
    fn fixed_examples() {
        assert_eq!(sphere(Ring::Integers, 3).homology_table(), "H0=Z H1=0 H2=0 H3=Z");
        assert_eq!(rp2(Ring::Integers).homology_table(), "H0=Z H1=Z/2 H2=0");
        assert_eq!(hopf(Ring::Integers).total().homology_table(), "H0=Z H1=0 H2=0 H3=Z");
        let Generated::TwoLine(t) = generate(&"trivial_borel(sphere(1),1)".parse().unwrap(), Ring::Integers).unwrap() else {
            panic!()
        };
        assert_eq!(t.a().total_rank(), 4);
        assert!(generate(&"trivial_borel(hopf,1)".parse().unwrap(), Ring::Integers).is_err());
        assert!(generate(&ExampleSpec::RandomComplex { seed: 1, size: 0 }, Ring::Integers).is_err());
    }
}
