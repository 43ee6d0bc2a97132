use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Syntax or schema error, with the offending field path and position.
    #[error("{path}: line {line}, column {column}, at `{field}`: {message}")]
    Parse {
        path: PathBuf,
        field: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),

    #[error(transparent)]
    Core(#[from] pulsecorr_core::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
