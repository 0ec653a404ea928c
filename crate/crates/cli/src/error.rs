use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] fvpg::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    /// A requested `--assert-*` check or condition did not hold.
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl CliError {
    /// 1 for usage, parse, solver and I/O errors; 2 for failed assertions.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Assertion(_) => 2,
            _ => 1,
        }
    }
}
