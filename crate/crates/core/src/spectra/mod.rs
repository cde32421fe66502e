//! Filtered complexes and their spectral sequences, the two-line complex
//! with its Gysin sequence, and page comparisons for filtered homotopies.

mod filtered;
mod two_line;

pub use filtered::{
    filtered_order, homotopy_page_agreement, page_iso_from_filtered_homotopy_equivalence, FilteredComplex,
    FilteredMap, IsoReport, SpectralPages,
};
pub use two_line::{check_cone_equals_gysin, EquivalenceReport, GysinSequence, TwoLineComplex};
