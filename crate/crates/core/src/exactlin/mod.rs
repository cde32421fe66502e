//! Exact linear algebra over Z, Q and F_p.

pub(crate) mod engine;
pub mod group;
pub mod matrix;
pub mod ring;
pub mod smith;
pub mod span;

pub use group::FGAbelianGroup;
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use ring::Ring;
pub use smith::{determinant, snf, subquotient, SmithForm};
pub use span::{induced_map, Span, Subquotient};
