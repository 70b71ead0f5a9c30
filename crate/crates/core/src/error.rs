use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while loading corpora or computing measures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("schema error at line {line}: {msg}")]
    Schema { line: usize, msg: String },

    #[error("duplicate judgment for query {query_id:?}, url {url:?}")]
    DuplicateKey { query_id: String, url: String },

    #[error("no document body for query {query_id:?}, url {url:?}")]
    MissingDocument { query_id: String, url: String },

    #[error("element {0:?} appears more than once in a list")]
    DuplicateElement(String),

    #[error("input is not a permutation of 1..={0}")]
    NotPermutation(usize),

    #[error("histogram has no terms")]
    EmptyHistogram,

    #[error("no queries for market {0:?}")]
    EmptyMarket(String),

    #[error("no snapshot pairs found")]
    NoPairs,

    #[error("no snapshot pair has judgments")]
    NoJudgedQueries,

    #[error("invalid perturbation spec: {0}")]
    InvalidSpec(String),

    #[error("invalid corpus profile: {0}")]
    InvalidProfile(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attaches the file an error came from.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with file context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::InFile { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
