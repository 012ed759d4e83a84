use std::io;

use thiserror::Error;

/// Errors produced by the library and surfaced by the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edge data")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// Modularity divides by 2m, so it has no value on an edgeless graph.
    #[error("metric undefined on a graph with no edges")]
    UndefinedMetric,

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("level {level} out of range (hierarchy has {levels} levels)")]
    LevelOutOfRange { level: usize, levels: usize },

    #[error("hierarchy has no levels")]
    EmptyHierarchy,

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input rather than a bug.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
