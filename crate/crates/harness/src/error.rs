use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Solver(#[from] adasmooth::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        HarnessError::Config(msg.into())
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit code: 2 for bad input or configuration, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        use adasmooth::Error as E;
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Solver(E::Config(_) | E::InvalidArgument(_) | E::Unsupported(_)) => 2,
            HarnessError::Solver(_) | HarnessError::Io { .. } => 1,
        }
    }
}
