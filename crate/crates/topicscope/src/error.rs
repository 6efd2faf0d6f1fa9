use std::io;
use std::path::{Path, PathBuf};

/// Failure classes of the command-line contract; each maps to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Bad flags, configuration or input data.
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Model(#[from] topicscope_core::Error),
    /// The EM cap was reached before the bound converged.
    #[error("{0}")]
    Convergence(String),
    /// Stored artifacts disagree with each other.
    #[error("{0}")]
    Mismatch(String),
}

pub type AppResult<T> = std::result::Result<T, AppError>;

impl AppError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) | Self::Io { .. } | Self::Model(_) => 2,
            Self::Convergence(_) => 3,
            Self::Mismatch(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Input(_) => "input",
            Self::Io { .. } => "io",
            Self::Model(_) => "model",
            Self::Convergence(_) => "convergence",
            Self::Mismatch(_) => "artifact_mismatch",
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_line(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }
}
