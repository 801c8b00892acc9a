use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across ingestion, modelling and retrieval.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("source document {id:?} has no target counterpart")]
    MissingCounterpart { id: String },

    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("dump stream truncated at byte {offset}")]
    TruncatedStream { offset: u64 },

    #[error("xml error at byte {offset}: {message}")]
    Xml { offset: u64, message: String },

    #[error("degenerate corpus: {0}")]
    DegenerateCorpus(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("svd did not converge after {iterations} iterations (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    ConvergenceFailure {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("corrupt model file: {0}")]
    CorruptModel(String),

    #[error("model format version mismatch: file has version {found}, this build reads version {expected}")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("wrong model kind: expected {expected}, found {found}")]
    WrongModelKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("rate undefined: {0}")]
    UndefinedRate(String),

    #[error("candidate collection is empty")]
    EmptyCandidates,

    #[error("query {query:?} has no gold target")]
    MissingGold { query: String },

    #[error("oracle self-test failed for {} document(s): {}", offenders.len(), offenders.join(", "))]
    SelfTestFailure { offenders: Vec<String> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("translation of {doc:?} failed: {reason}")]
    Translation { doc: String, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 2 usage/input, 3 data/model, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::MalformedRecord { .. }
            | Error::MissingCounterpart { .. }
            | Error::TruncatedStream { .. }
            | Error::Xml { .. }
            | Error::Precondition(_) => 2,
            Error::ConvergenceFailure { .. } => 4,
            _ => 3,
        }
    }

    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::MissingCounterpart { .. } => "missing-counterpart",
            Error::MalformedRecord { .. } => "malformed-record",
            Error::TruncatedStream { .. } => "truncated-stream",
            Error::Xml { .. } => "xml",
            Error::DegenerateCorpus(_) => "degenerate-corpus",
            Error::EmptyCorpus => "empty-corpus",
            Error::Domain(_) => "domain",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::ConvergenceFailure { .. } => "convergence-failure",
            Error::CorruptModel(_) => "corrupt-model",
            Error::VersionMismatch { .. } => "version-mismatch",
            Error::WrongModelKind { .. } => "wrong-model-kind",
            Error::UndefinedRate(_) => "undefined-rate",
            Error::EmptyCandidates => "empty-candidates",
            Error::MissingGold { .. } => "missing-gold",
            Error::SelfTestFailure { .. } => "self-test-failure",
            Error::Precondition(_) => "precondition",
            Error::Translation { .. } => "translation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
