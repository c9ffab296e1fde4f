use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The kernel is singular at the requested pair of points.
    #[error("singularity: {0}")]
    Singularity(String),
    /// A series or iteration did not reach the requested accuracy.
    #[error("no convergence: {0}")]
    NonConvergence(String),
    /// Parameters fall on a degenerate case that is deliberately not implemented.
    #[error("unsupported parameters: {0}")]
    UnsupportedParameter(String),
    /// A curve leaves the closed right half-plane or is otherwise malformed.
    #[error("geometry error: {0}")]
    Geometry(String),
    /// Every optimizer restart failed its first line search.
    #[error("no progress: {0}")]
    NoProgress(String),
    /// A configuration does not live on the curve a density model describes.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    /// A bracketing search found no sign change.
    #[error("no sign change: {0}")]
    NoSignChange(String),
    /// Reading or writing a table failed.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
