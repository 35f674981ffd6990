use std::path::PathBuf;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const UNSTABLE: i32 = 2;
    pub const RESOURCE_LIMIT: i32 = 3;
    pub const VERIFY_FAILED: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum GwError {
    #[error(transparent)]
    Core(#[from] cp1_core::Error),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cache format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u64, expected: u64 },
    #[error("corrupt cache: {0}")]
    CorruptCache(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl GwError {
    pub fn exit_code(&self) -> i32 {
        match self {
            GwError::Core(cp1_core::Error::UnstableModuli(_)) => exit::UNSTABLE,
            GwError::ResourceLimit(_) => exit::RESOURCE_LIMIT,
            _ => exit::USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, GwError>;
