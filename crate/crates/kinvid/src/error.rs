use std::path::{Path, PathBuf};

use kinvid_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Context {
        path: PathBuf,
        #[source]
        source: CoreError,
    },
    #[error("missing input: {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn format(path: &Path, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    pub fn context(path: &Path, source: CoreError) -> Self {
        Error::Context {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 for invalid input, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) | Error::Context { source: e, .. } => core_exit_code(e),
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => 1,
            Error::Io { .. } => 2,
            Error::Format { .. } | Error::Missing(_) | Error::Usage(_) => 1,
        }
    }
}

fn core_exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::NotConverged { .. }
        | CoreError::Degenerate(_)
        | CoreError::ZeroMass
        | CoreError::AllSlicesSkipped { .. } => 2,
        CoreError::AtScale { source, .. } => core_exit_code(source),
        _ => 1,
    }
}
