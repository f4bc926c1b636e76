use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("illegal transition {action} at step {step}: {reason}")]
    IllegalTransition {
        step: usize,
        action: String,
        reason: &'static str,
    },
    #[error("sequence ended with {stack} stack items and {queue} queued EDUs")]
    NonTerminalEnd { stack: usize, queue: usize },
    #[error("no training documents")]
    EmptyTrainSet,
    #[error("label inventories differ: model uses {model}, data uses {data}")]
    InventoryMismatch { model: String, data: String },
    #[error("feature config hash {found} does not match expected {expected}")]
    ConfigMismatch { expected: String, found: String },
    #[error("bad model file: {0}")]
    ModelFormat(String),
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
