use thiserror::Error;

/// Errors produced by the estimation, selection and inference routines.
#[derive(Debug, Error)]
pub enum RidgeError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("rank-deficient Gram matrix: eigenvalue {index} is {value:e}")]
    RankDeficient { index: usize, value: f64 },

    #[error("matrix is singular or not positive definite (pivot {pivot:e} at row {row})")]
    Singular { row: usize, pivot: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("bootstrap failed: {discarded} of {requested} replicates had a rank-deficient Gram matrix (limit {limit})")]
    TooManyDiscards {
        discarded: usize,
        requested: usize,
        limit: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RidgeError {
    /// Numeric failures as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            RidgeError::NoConvergence { .. }
                | RidgeError::RankDeficient { .. }
                | RidgeError::Singular { .. }
                | RidgeError::Undefined(_)
                | RidgeError::TooManyDiscards { .. }
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        RidgeError::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, RidgeError>;
