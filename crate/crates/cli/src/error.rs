use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: line {line}, column {column}: {msg}", path.display())]
    Syntax { path: PathBuf, line: usize, column: usize, msg: String },
    #[error("{}: field `{field}`: {msg}", path.display())]
    Field { path: PathBuf, field: String, msg: String },
    #[error("{0}")]
    Compute(#[from] dualmat::Error),
    /// The input is well formed but not of a kind the command accepts.
    #[error("{0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Syntax { .. } | CliError::Field { .. } => 1,
            CliError::Compute(e) if e.is_existence_failure() => 3,
            CliError::Compute(_) | CliError::Precondition(_) | CliError::Verify(_) => 2,
        }
    }
}
