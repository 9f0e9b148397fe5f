use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("tensor factor index {index} out of range for {nfactors} factors")]
    FactorOutOfRange { index: usize, nfactors: usize },

    #[error("matrix is singular within tolerance: smallest eigenvalue {min_eig:.3e}")]
    Singular { min_eig: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("matrix is not a valid state: {0}")]
    InvalidState(String),

    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),

    #[error("resampling exhausted after {attempts} attempts: {reason}")]
    ResamplingExhausted { attempts: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
