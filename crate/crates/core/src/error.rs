use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set violates a type invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The time grid cannot hold the requested signal.
    #[error("grid error: {0}")]
    Grid(String),

    /// Two operands were expected to share a grid and do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A lookup fell outside the sampled range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// The marching solver produced a non-finite value.
    #[error("solver diverged at step {step} (z = {z}): {detail}")]
    Divergence { step: usize, z: f64, detail: String },

    /// Nothing left to analyse after masking.
    #[error("empty analysis window: {0}")]
    EmptyWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
