use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("point {0} lies outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("non-periodic antiderivative: mean coefficient {0:e} is nonzero")]
    NonPeriodicAntiderivative(f64),
    #[error("shift undefined for Chebyshev")]
    ShiftUndefined,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("training diverged: {0}")]
    Diverged(String),
    #[error("bad file format: {0}")]
    Format(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
