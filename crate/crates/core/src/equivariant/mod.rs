//! Equivariant complexes built from combinatorial data: the equivariant
//! Morse complex, the Morse-Bott complex with its two-line filtration, the
//! Gysin sequence and BV operator of a datum, the trivial-action Borel
//! model, the Gysin diagram of an action split, and an exact-sequence
//! solver.

mod borel;
mod diagram;
mod morse;
mod morse_bott;
mod solver;

pub use borel::{borel_trivial_action, borel_two_line, cpn_complex, BorelReport};
pub use diagram::{
    corollary_certificate, diagram17_check, sawc_datum, sawc_model, CorollaryReport, DiagramReport,
    GysinDiagramInstance, NamedClass,
};
pub use morse::{assemble_s1_morse, matches_quotient, Circle, S1MorseDatum};
pub use morse_bott::{
    assemble_morse_bott, bv_delta, filtration_drops, gysin_theorem11, phi_e1, ActionSign, BvReport, MorseBottS1Datum,
    Orbit, PhiReport,
};
pub use solver::{check_against, les_solver, Deduction, MapStatus, PartialLes, PartialMap, PartialSlot, SolvedReport};
