use std::fmt;

use facecap::Error as CoreError;

/// Exit status classes of the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

impl ErrorKind {
    pub fn code(self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Data => 2,
            ErrorKind::Numerical => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Usage => "usage",
            ErrorKind::Data => "data",
            ErrorKind::Numerical => "numerical",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("Monte Carlo ratio disagrees with the formula beyond {sigmas} standard errors")]
    ValidationFailed { sigmas: f64 },
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            CliError::Usage(_) | CliError::ThreadPool(_) => ErrorKind::Usage,
            CliError::Output { .. } => ErrorKind::Data,
            CliError::ValidationFailed { .. } => ErrorKind::Numerical,
            CliError::Core(e) => match e {
                CoreError::Domain { .. } | CoreError::NoConvergence { .. } => ErrorKind::Numerical,
                _ => ErrorKind::Data,
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind().code()
    }

    /// One machine-parsable line for stderr.
    pub fn diagnostic(&self) -> Diagnostic<'_> {
        Diagnostic(self)
    }
}

pub struct Diagnostic<'a>(&'a CliError);

impl fmt::Display for Diagnostic<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = self.0.kind();
        let message = self.0.to_string().replace(['\n', '\r'], " ");
        write!(f, "error kind={} code={} message={:?}", kind.as_str(), kind.code(), message)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
