use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the capacity pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// An iterative evaluation failed to converge.
    #[error("{op} did not converge after {iterations} iterations")]
    NoConvergence { op: &'static str, iterations: usize },

    /// Embedding data violates a structural or numeric invariant.
    #[error("invalid embeddings: {0}")]
    InvalidEmbeddings(String),

    /// Row `row` has (near) zero norm and cannot be projected onto the sphere.
    #[error("row {row} has zero norm")]
    ZeroNorm { row: usize },

    #[error("embeddings must be normalized before computing cosine scores")]
    NotNormalized,

    #[error("histogram is empty")]
    EmptyHistogram,

    #[error("invalid labels: {0}")]
    Labels(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// File format violations, each naming where in the file the problem sits.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: bad magic {found:?} (expected \"EMB1\")")]
    BadMagic { path: PathBuf, found: [u8; 4] },

    #[error("{path}: unsupported version {version}")]
    UnsupportedVersion { path: PathBuf, version: u32 },

    #[error("{path}: unsupported dtype {dtype}")]
    UnsupportedDtype { path: PathBuf, dtype: u8 },

    #[error("{path}: reserved header bytes must be zero")]
    ReservedBytes { path: PathBuf },

    #[error("{path}: truncated at byte offset {offset}, expected {expected} bytes")]
    Truncated {
        path: PathBuf,
        offset: u64,
        expected: u64,
    },

    #[error("{path}: {extra} trailing bytes after payload at byte offset {offset}")]
    TrailingBytes { path: PathBuf, offset: u64, extra: u64 },

    #[error("{path}: non-finite value at byte offset {offset}")]
    NonFiniteBinary { path: PathBuf, offset: u64 },

    #[error("{path}:{line}: non-finite value")]
    NonFiniteCsv { path: PathBuf, line: u64 },

    #[error("{path}:{line}: expected {expected} fields, found {found}")]
    Ragged {
        path: PathBuf,
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("{path}:{line}: {detail}")]
    Parse {
        path: PathBuf,
        line: u64,
        detail: String,
    },

    #[error("{path}: {detail}")]
    Header { path: PathBuf, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
