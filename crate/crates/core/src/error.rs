use thiserror::Error;

/// Errors raised by the numerical layers of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} of {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("matrix is not an involution (||m^2 - I|| = {residual:e})")]
    NotInvolution { residual: f64 },

    #[error("matrix is not Hermitian (||m - m^dagger|| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
