use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("genre `{0}` is not in the corpus")]
    UnknownGenre(String),
    #[error("corpus `{0}` was not provided")]
    UnknownCorpus(String),
    #[error("cohort budget infeasible: {0}")]
    InfeasibleBudget(String),
    #[error("document `{doc_id}` of corpus `{corpus}` is both a training and a test document")]
    Leakage { corpus: String, doc_id: String },
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Parser(#[from] rstkit_parser::Error),
    #[error(transparent)]
    Core(#[from] rstkit::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
