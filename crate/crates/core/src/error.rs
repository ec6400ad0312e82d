use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A Riesz kernel was evaluated at zero distance.
    #[error("kernel {kernel} is singular at d = 0; integrate it with double_primitive")]
    SingularEvaluation { kernel: String },

    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    /// Cholesky met a pivot that is not strictly positive.
    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error(
        "truncation L = {truncation} leaves a tail bound of {bound:e} above the tolerance; \
         the smallest admissible L is {minimal}"
    )]
    TruncationTooSmall {
        truncation: f64,
        bound: f64,
        minimal: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that come from the numbers rather than the caller's
    /// arguments.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::NumericFailure(_)
                | Error::SingularEvaluation { .. }
        )
    }
}
