use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A sampled quantity does not decay at the edge of its grid.
    #[error("{what} does not decay at the grid boundary (edge/max ratio {ratio:.3e})")]
    Decay { what: &'static str, ratio: f64 },

    #[error("insufficient angular coverage: {0}")]
    Coverage(String),

    /// The truncated operator basis is too small for the request.
    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
