use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A shape precondition failed (zero voters, mismatched lengths, ...).
    #[error("dimension error: {0}")]
    Dimension(String),
    /// A scalar parameter is outside its domain.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Candidate index out of range.
    #[error("index error: candidate {index} is not in 0..{len}")]
    Index { index: usize, len: usize },
    /// Cholesky factorization failed; the matrix is not positive semi-definite.
    #[error("matrix error: non-positive pivot {value:e} at index {pivot}")]
    Matrix { pivot: usize, value: f64 },
    /// A request the algorithms deliberately do not support.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A fitting routine could not produce an estimate from the data.
    #[error("fit error: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
