//! CLI errors and their exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Core(#[from] lzsim_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse { line, message: message.into() }
    }

    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        CliError::Validation { field: field.to_string(), message: message.into() }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    /// 1 usage, 2 parse or validation, 3 runtime.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. } | CliError::Validation { .. } => 2,
            CliError::Core(_) | CliError::Io { .. } | CliError::Runtime(_) => 3,
        }
    }
}
