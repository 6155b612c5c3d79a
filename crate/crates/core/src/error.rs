use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed CSV at a given (1-based) line.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity error: {0}")]
    Capacity(String),

    /// Every state assigns zero probability to the observation at `step`.
    #[error("degenerate likelihood: observation at step {step} has zero probability under the model")]
    DegenerateLikelihood { step: usize },

    #[error("codec error: no symbol for combination {0}")]
    Codec(String),

    /// A user-supplied model returned a non-finite value.
    #[error("evaluation error at sample row {row}: {message}")]
    Evaluation { row: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Schema(_) | Error::Io(_) => 2,
            Error::Capacity(_) => 4,
            _ => 3,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
