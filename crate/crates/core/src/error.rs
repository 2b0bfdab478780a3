use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QwError {
    /// An input violated a precondition (dimension, Hermiticity, Bloch norm, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative routine stopped without meeting its tolerances.
    #[error("numeric failure: {message} (residual {residual:e})")]
    NumericFailure {
        message: String,
        residual: f64,
        /// Best primal objective reached, when the failing routine had one.
        best_value: Option<f64>,
    },
}

impl QwError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        QwError::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, residual: f64) -> Self {
        QwError::NumericFailure { message: msg.into(), residual, best_value: None }
    }
}

pub type Result<T> = std::result::Result<T, QwError>;
