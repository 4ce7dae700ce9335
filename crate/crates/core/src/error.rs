use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input: config, material file, axis ids.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("material not found: {0}")]
    MaterialNotFound(String),

    /// A physical quantity fell outside the domain where the model is valid.
    #[error("range error: {0}")]
    Range(String),

    #[error("solver error: {0}")]
    Solver(String),

    /// The state has vanishing norm or intensity.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no beat detected: {0}")]
    NoBeat(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::MaterialNotFound(_) | Error::Io { .. } => 2,
            Error::Range(_)
            | Error::DegenerateState(_)
            | Error::Precondition(_)
            | Error::NoBeat(_) => 3,
            Error::Solver(_) => 4,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
