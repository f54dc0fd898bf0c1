use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors raised by the polynomial, knot and representation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("division is not exact: {0}")]
    NonExactDivision(String),

    #[error("polynomial cannot be symmetrized: {0}")]
    NotSymmetrizable(String),

    #[error("invalid torus knot T({a},{b}): {reason}")]
    InvalidTorusKnot { a: i64, b: i64, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid peripheral data: {0}")]
    InvalidPeripheral(String),

    /// A coefficient prediction did not hold on the computed product.
    #[error("predicted witness not found: {0}")]
    WitnessMismatch(String),
}

impl Error {
    /// Stable machine-readable tag used in structured error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::ZeroPolynomial(_) => "zero_polynomial",
            Error::NonExactDivision(_) => "non_exact_division",
            Error::NotSymmetrizable(_) => "not_symmetrizable",
            Error::InvalidTorusKnot { .. } => "invalid_torus_knot",
            Error::Precondition(_) => "precondition",
            Error::InvalidPeripheral(_) => "invalid_peripheral",
            Error::WitnessMismatch(_) => "witness_mismatch",
        }
    }
}
