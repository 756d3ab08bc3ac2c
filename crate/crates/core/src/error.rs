use thiserror::Error;

/// Errors produced by construction and norm computations.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The iterative optimizer failed to stabilize. The best certified value
    /// found so far is carried along so callers can still inspect it.
    #[error("optimizer did not converge within the configured budget (best value found: {best})")]
    NonConvergence { best: f64 },
}

pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    pub(crate) fn dim(context: &'static str, expected: usize, got: usize) -> Self {
        CoreError::DimensionMismatch {
            context,
            expected,
            got,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CoreError::InvalidInput(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        CoreError::Unsupported(msg.into())
    }
}
