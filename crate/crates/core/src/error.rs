use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed XML: {0}")]
    MalformedXml(String),

    #[error("node `{node}` points to missing parent `{parent}`")]
    DanglingParentId { node: String, parent: String },

    #[error("relation `{0}` is not declared in the header")]
    UnknownRelation(String),

    #[error("leaves of `{0}` are not contiguous")]
    NonProjectiveSpan(String),

    #[error("document has {0} root nodes")]
    MultipleRoots(usize),

    #[error("segment `{0}` has no text")]
    EmptySegment(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("line {line}: expected 4 tab-separated columns, found {found}")]
    BadColumnCount { line: usize, found: usize },

    #[error("line {line}: head {head} out of range 0..={max}")]
    HeadOutOfRange { line: usize, head: usize, max: usize },

    #[error("dependency arcs contain a cycle through EDU {0}")]
    CycleDetected(usize),

    #[error("document `{0}` listed in the manifest was not found")]
    MissingDocument(String),

    #[error("document id `{0}` occurs more than once")]
    DuplicateDocId(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("EDU counts differ: gold has {gold}, predicted has {pred}")]
    LeafMismatch { gold: usize, pred: usize },

    #[error("nothing to aggregate")]
    EmptyInput,

    #[error("token counts differ: gold has {gold}, predicted has {pred}")]
    TokenCountMismatch { gold: usize, pred: usize },

    #[error("unknown relation label `{label}` for scheme {scheme}")]
    UnknownLabel { label: String, scheme: String },

    #[error("dependency document has no root arc")]
    NoRoot,

    #[error("documents do not align: {0}")]
    DocMismatch(String),

    #[error("contingency table has an all-zero {0}")]
    ZeroMargin(String),

    #[error("{0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
