use thiserror::Error;

/// Errors raised by the algebra pipelines. Every variant names the invariant
/// that failed and where.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("not a sublattice: {0}")]
    NotASublattice(String),

    #[error("invalid complex: d^2 != 0 at degree {degree}")]
    InvalidComplex { degree: i64 },

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid chain map: chain condition fails at degree {degree}")]
    InvalidChainMap { degree: i64 },

    #[error("exactness failure at {0}")]
    ExactnessFailure(String),

    #[error("not a morphism of short exact sequences: {0}")]
    NotAMorphism(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("not a homotopy: f - g != dK + Kd at degree {degree}")]
    NotAHomotopy { degree: i64 },

    #[error("homotopy has order {found}, at most {allowed} allowed")]
    OrderTooHigh { found: usize, allowed: usize },

    #[error("d^2 != 0: {0}")]
    DSquaredNonzero(String),

    #[error("subcomplex violation: {0}")]
    SubcomplexViolation(String),

    #[error("contradiction: {0}")]
    Contradiction(String),

    #[error("not well defined on homology: {0}")]
    NotWellDefined(String),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
