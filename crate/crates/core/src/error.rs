use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("integer {0} does not fit in a machine integer")]
    Overflow(BigInt),

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// Backward iteration or whole-line operators were requested for a
    /// non-invertible map. Only half-line operators exist there.
    #[error("{0} is not invertible: backward orbits and whole-line operators are unavailable, use the half-line form")]
    NotInvertible(&'static str),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("phase jump {jump:.3} at t = {t:.3} is too large to unwrap unambiguously; reduce dt")]
    PhaseJump { t: f64, jump: f64 },

    #[error("backward history too short: coordinate {needed} requested, {available} available")]
    InsufficientHistory { needed: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
