use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("spectral window [{lo}, {hi}] contains no modes")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("singular covariance: {0}")]
    SingularCovariance(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("accuracy target {target:e} not reached (achieved {achieved:e})")]
    Accuracy { achieved: f64, target: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
