use std::path::PathBuf;

use thiserror::Error;

/// Problems with a run configuration; every variant maps to exit code 2.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("range error at {path}: {message}")]
    Range { path: String, message: String },
    #[error("{0}")]
    Conflict(String),
    #[error("missing required block `{0}`")]
    Missing(String),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical error: {0}")]
    Numerical(#[from] eraser_core::Error),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl SimError {
    pub fn exit_code(&self) -> u8 {
        match self {
            SimError::Config(_) => 2,
            SimError::Numerical(_) | SimError::OracleMismatch(_) => 3,
            SimError::Io { .. } => 4,
        }
    }
}
