use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("invalid budget: {0}")]
    InvalidBudget(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("objective is not absolutely homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("degenerate reference point: {0}")]
    DegenerateReference(String),

    #[error("parse error at {locus}: {message}")]
    Parse { locus: String, message: String },
}

impl LabError {
    pub(crate) fn parse(locus: impl Into<String>, message: impl Into<String>) -> Self {
        LabError::Parse {
            locus: locus.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
