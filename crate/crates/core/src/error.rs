use thiserror::Error;

/// Errors raised by the entropy library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("usage error: {0}")]
    Usage(String),

    /// A value violated one of its type invariants (Hermiticity, trace, ...).
    #[error("invariant violated: {0}")]
    Validation(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    /// The physical model does not apply to the requested parameters.
    #[error("model domain error: {0}")]
    ModelDomain(String),

    #[error("evaporation step dE = {de} exceeds the limit {limit} (0.01 M)")]
    StepTooLarge { de: f64, limit: f64 },

    /// Not a failure: the black hole has no mass left to radiate.
    #[error("black hole mass exhausted")]
    MassExhausted,
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
