//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain: {0}")]
    Domain(String),

    /// A series, refinement loop or scan failed to reach its target.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// A decay certificate cannot deliver the requested tolerance.
    #[error("certificate: {0}")]
    Certificate(String),

    /// A theorem's precondition failed on the supplied data.
    #[error("precondition: {0}")]
    Precondition(String),

    /// A coincident-point (x = 0) request on a divergent channel.  The
    /// classification of the point is available through
    /// [`crate::correlators::coincident_point_report`].
    #[error("coincident point: {0}")]
    Coincident(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn non_convergence(msg: impl Into<String>) -> Self {
        Error::NonConvergence(msg.into())
    }
}
