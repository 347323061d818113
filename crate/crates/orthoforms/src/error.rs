use thiserror::Error;

use crate::rational::Q;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },

    #[error("E8 is not supported here: the discriminant-kernel group of 2U+E8 is not nice, so its tables fall outside the generator-weight pattern")]
    E8Rejected,

    #[error("lattices of rank {0} exceed the supported expansion rank")]
    RankTooLarge(usize),

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("theta block is invalid: {0}")]
    QOrderMismatch(String),

    #[error("exact division failed at q-order {order}: {residual}")]
    NonExactDivision { order: Q, residual: String },

    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: Q, have: Q },

    #[error("singular coefficient {coeff} at (n={n}, l={l}) is not integral")]
    NonIntegralSingularPart { n: Q, l: String, coeff: Q },

    #[error("Borcherds product has negative xi-order C = {0}")]
    NegativeXiOrder(Q),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("lattice {lattice} is outside the three families: {reason}")]
    FamilyViolation { lattice: String, reason: String },

    #[error("Jacobian weight routes disagree: formula {formula}, solver {solver}, sum rule {sum_rule}")]
    Disagreement { formula: Q, solver: Q, sum_rule: Q },

    #[error("Hilbert series diverges: generator weights are not bounded below by the index")]
    Divergent,
}

pub type Result<T> = std::result::Result<T, Error>;
