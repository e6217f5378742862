use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] mpcore::Error),
    #[error("syntax error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    /// 3 for exhausted budgets, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mpcore::Error::Budget(_)) => 3,
            _ => 2,
        }
    }
}
