//! Exact homological algebra for mapping cones, two-line spectral
//! sequences, Gysin sequences and S^1-equivariant Morse-Bott complexes.
//!
//! Everything is computed with exact arithmetic over Z, Q or F_p. Over the
//! integers, groups are compared as lattices, so torsion is never lost.

pub mod error;
pub mod cli;
pub mod complexes;
pub mod cones;
pub mod corpus;
pub mod exactlin;
pub mod equivariant;
pub mod spectra;

pub use error::{Error, Result};
