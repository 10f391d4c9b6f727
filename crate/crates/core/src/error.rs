use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method stopped without meeting its tolerance.
    #[error("{method} did not converge (best residual {residual:.3e})")]
    Convergence { method: &'static str, residual: f64 },

    /// A domain descriptor could not be parsed or describes an invalid shape.
    #[error("invalid domain descriptor: {0}")]
    Descriptor(String),

    /// The mesh violates a structural invariant.
    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
