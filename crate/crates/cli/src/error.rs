use std::fmt;
use std::path::PathBuf;

/// Harness-level failures, each mapped to a process exit code:
/// 2 for usage and input problems, 3 for invariant failures.
#[derive(Debug)]
pub enum HarnessError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Parse {
        path: PathBuf,
        detail: String,
    },
    Usage(String),
    Core(latsum::Error),
    Invariant(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Io { .. } | HarnessError::Parse { .. } | HarnessError::Usage(_) => 2,
            HarnessError::Core(latsum::Error::UnusableTester) => 3,
            HarnessError::Core(_) => 2,
            HarnessError::Invariant(_) => 3,
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            HarnessError::Parse { path, detail } => write!(f, "{}: {detail}", path.display()),
            HarnessError::Usage(msg) => write!(f, "usage error: {msg}"),
            HarnessError::Core(e) => write!(f, "{e}"),
            HarnessError::Invariant(msg) => write!(f, "invariant failure: {msg}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<latsum::Error> for HarnessError {
    fn from(e: latsum::Error) -> Self {
        HarnessError::Core(e)
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
