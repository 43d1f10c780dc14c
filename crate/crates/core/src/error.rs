use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrackError {
    #[error("window does not overlap any frame pixel")]
    EmptyWindow,

    #[error("every pixel in the window has zero kernel weight")]
    DegenerateKernel,

    #[error("histogram dimension mismatch: {left} vs {right} bins")]
    DimensionMismatch { left: usize, right: usize },

    #[error("histogram has zero total mass")]
    ZeroMass,

    #[error("no candidate pixel shares a bin with the target model")]
    ZeroWeight,

    #[error("target lost")]
    TargetLost,

    #[error("template store holds no candidate models")]
    EmptyStore,

    #[error("sequence contains no frames")]
    EmptySequence,

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid synthetic sequence: {0}")]
    Spec(String),

    #[error("failed to decode {}: {reason}", path.display())]
    Decode { path: PathBuf, reason: String },

    #[error("resolution mismatch in {}: expected {expected:?}, found {found:?}", path.display())]
    ResolutionMismatch {
        path: PathBuf,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid frame sequence: {0}")]
    Sequence(String),

    #[error("malformed record: {0}")]
    Record(String),

    #[error("failed to write {}: {reason}", path.display())]
    Write { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = TrackError> = std::result::Result<T, E>;
