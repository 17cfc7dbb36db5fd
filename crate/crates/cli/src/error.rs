use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Config {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },
    Invalid(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Core(singosc_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config {
                path: Some(p),
                line,
                message,
            } => write!(f, "{}:{line}: {message}", p.display()),
            CliError::Config {
                path: None,
                line,
                message,
            } => write!(f, "config line {line}: {message}"),
            CliError::Invalid(m) => write!(f, "invalid configuration: {m}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Io { source, .. } => Some(source),
            CliError::Core(e) => Some(e),
            _ => None,
        }
    }
}

impl From<singosc_core::Error> for CliError {
    fn from(e: singosc_core::Error) -> Self {
        CliError::Core(e)
    }
}
