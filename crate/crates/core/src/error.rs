use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is too small; need q >= 2")]
    DimensionTooSmall(usize),

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("vector norm {0} is too far from 1 to be treated as rounding drift")]
    NotUnitNorm(f64),

    #[error("point is at infinity under this map")]
    PointAtInfinity,

    #[error("point lies outside the open hemisphere x1 > 0")]
    OutsideHemisphere,

    #[error("polar decomposition is degenerate at the pole or its antipode")]
    DegeneratePolar,

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("matrix determinant {0} is not positive")]
    NonPositiveDeterminant(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
