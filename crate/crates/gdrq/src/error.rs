use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },

    #[error("invalid setting: {0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] gdrq_core::Error),

    #[error("run {run}: {source}")]
    Run { run: u64, source: gdrq_core::Error },

    #[error("data {}: {message}", path.display())]
    Data { path: PathBuf, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("self-test failed: {0}")]
    SelfTest(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status; usage errors (2) are reported by the argument
    /// parser before any of these can occur.
    pub fn exit_code(&self) -> u8 {
        1
    }
}
