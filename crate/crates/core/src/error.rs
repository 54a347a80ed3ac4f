use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("exponent step mismatch: {left} vs {right}")]
    AlphaMismatch { left: String, right: String },

    #[error("invalid equation class: {0}")]
    InvalidClass(String),

    #[error("branch cut violation at {0}")]
    BranchCut(String),

    #[error("ill-conditioned fit: scaled condition estimate {estimate:.3e} exceeds {bound:.3e}")]
    IllConditioned { estimate: f64, bound: f64 },

    #[error("unstable direction: {0}")]
    Unstable(String),

    #[error("compatibility violated for condition {k}: mismatch {mismatch:.3e}")]
    Compatibility { k: usize, mismatch: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("tolerance not met: {0}")]
    Tolerance(String),

    #[error("configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
