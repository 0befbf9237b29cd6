use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
///
/// Precondition failures (bad exponents, shape mismatches, size caps) are
/// kept apart from numeric failures (non-convergence, singular matrices) so
/// callers such as the CLI can map them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent p = {0} is outside the open interval (1, inf)")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("size cap exceeded: {what} needs {size}, cap is {cap}")]
    SizeCap { what: &'static str, size: usize, cap: usize },

    #[error("matrix is singular or numerically singular: {0}")]
    Singular(String),

    #[error("no convergence in {routine} after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::InvalidExponent(_)
                | Error::InvalidParameter(_)
                | Error::DimensionMismatch { .. }
                | Error::SizeCap { .. }
                | Error::Parse { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
