//! Error type shared across the library.

use crate::solvers::SolverTrace;

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Dimension or structural mismatch in an input matrix.
    #[error("shape error: {0}")]
    Shape(String),

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {what} (smallest eigenvalue {min_eigenvalue:e})")]
    Domain { what: String, min_eigenvalue: f64 },

    /// Numerically rank-deficient input to a factorization.
    #[error("rank error: {0}")]
    Rank(String),

    /// Points or vectors in a geometric configuration the manifold cannot
    /// serve (cut locus, antipodes, unsolvable inverse retraction).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Operation not available in the requested geometry mode.
    #[error("mode error: {0}")]
    Mode(String),

    /// API misuse, e.g. tangent vectors based at different points.
    #[error("usage error: {0}")]
    Usage(String),

    /// Linear solve failed or is too ill-conditioned to trust.
    #[error("solve error: {0}")]
    Solve(String),

    /// Weighted averaging could not be carried out.
    #[error("averaging error: {what} (residual {residual:e})")]
    Averaging { what: String, residual: f64 },

    /// A solver produced a non-finite objective; the trace up to the failure
    /// is attached.
    #[error("divergence error: non-finite objective at iteration {iter}")]
    Diverged { iter: u64, trace: Box<SolverTrace> },
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
