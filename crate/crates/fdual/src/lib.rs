//! File formats, checkpointed parallel search and the `fdual` command line
//! on top of [`fdual_core`].

pub mod checkpoint;
pub mod cli;
pub mod format;
pub mod runner;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Group(#[from] fdual_core::Error),
    #[error("{0}")]
    Invalid(String),
}
