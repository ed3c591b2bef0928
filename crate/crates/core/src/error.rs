//! Error type shared by every layer of the crate.

use thiserror::Error;

/// Failures reported by model construction, numerics and protocols.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (relative deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("{quantity} is undefined: {reason}")]
    Undefined { quantity: &'static str, reason: String },

    #[error("argument {argument:e} is outside the overflow-safe range |x| <= {limit}")]
    OutOfRange { argument: f64, limit: f64 },

    #[error("regime violation: {0}")]
    RegimeViolation(String),

    #[error("truncation loss {weight:e} exceeds {limit:e} at t = {time:e} s")]
    TruncationLoss { time: f64, weight: f64, limit: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Rejects non-finite values and, when `positive` is set, values `<= 0`.
pub(crate) fn check_finite(name: &'static str, value: f64, positive: bool) -> Result<f64> {
    if !value.is_finite() {
        return Err(invalid(name, format!("must be finite, got {value}")));
    }
    if positive && value <= 0.0 {
        return Err(invalid(name, format!("must be positive, got {value}")));
    }
    Ok(value)
}
