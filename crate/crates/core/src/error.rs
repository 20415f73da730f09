use thiserror::Error;

/// Errors raised by the guesswork library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("size mismatch: expected {expected} labels, got {got}")]
    Size { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("state {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { index: usize, min_eigenvalue: f64 },

    #[error("total trace of the ensemble is {0}, expected 1")]
    Trace(f64),

    #[error("empty ensemble")]
    Empty,

    #[error("not a bijection of 1..={0}")]
    NotBijection(usize),

    #[error("cost not balanced")]
    NotBalanced,

    #[error("prior distribution is not uniform")]
    NonUniformPrior,

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("{m}! numberings exceed the factorial cap ({cap}); use the benevolent fast path or raise GUESSWORK_FACTORIAL_CAP")]
    CapExceeded { m: usize, cap: usize },

    #[error("invalid ensemble family: {0}")]
    Family(String),

    #[error("{0}")]
    Unavailable(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
