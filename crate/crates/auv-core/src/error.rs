//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by codec operations.
#[derive(Debug, Error)]
pub enum AuvError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("wav {path}: {message}")]
    Wav { path: PathBuf, message: String },

    #[error("invalid audio: {0}")]
    InvalidAudio(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("quantizer: {0}")]
    Quantizer(String),

    #[error("bitstream: {0}")]
    Bitstream(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("manifest {path} line {line}: {message}")]
    Manifest {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("training aborted: non-finite {component} loss at step {step}")]
    NonFiniteLoss { component: String, step: u64 },

    #[error("teacher features: {0}")]
    TeacherFeatures(String),

    #[error("unknown teacher: {0}")]
    UnknownTeacher(String),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, AuvError>;
