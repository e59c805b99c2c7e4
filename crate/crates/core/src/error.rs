use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial order ({m}, {n}) exceeds the supported cutoff {max}")]
    OrderTooLarge { m: usize, n: usize, max: usize },

    #[error("wavelet is not admissible: defect {defect:e}")]
    NonAdmissible { defect: f64 },

    #[error("integral does not converge: {0}")]
    Divergent(String),

    #[error("field does not decay at the grid boundary: max boundary magnitude {boundary:e} exceeds {threshold:e}")]
    BoundaryDecay { boundary: f64, threshold: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("unsupported scale power {0}")]
    UnsupportedPower(i32),

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
