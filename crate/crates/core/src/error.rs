use thiserror::Error;

use crate::epr::EprPairReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {dim} exceeds the configured maximum {max}")]
    Size { dim: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("side mismatch: {0}")]
    SideMismatch(String),

    #[error("operation requires a pure state")]
    MixedState,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("state is not an EPR state for incommensurable pairs (defects {:.3e}/{:.3e}, dispersions {:.3e}/{:.3e})",
        .0.defect_e, .0.defect_f, .0.dispersion1, .0.dispersion2)]
    NotIncommensurable(Box<EprPairReport>),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("unknown repro case `{0}`")]
    UnknownCase(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
