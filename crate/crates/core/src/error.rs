use std::path::PathBuf;

use thiserror::Error;

use crate::scenario::ScenarioParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("empty profile: {0}")]
    EmptyProfile(String),

    #[error("degenerate marker configuration: {0}")]
    DegenerateConfiguration(String),

    #[error(transparent)]
    Parse(#[from] ScenarioParseError),

    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed file: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            msg: msg.into(),
        }
    }

    /// Process exit code for the command-line front end.
    ///
    /// | code | meaning |
    /// |------|---------|
    /// | 2 | configuration (bad scene, mismatched inputs, parse errors) |
    /// | 3 | I/O or malformed file |
    /// | 4 | numeric (empty profile, degenerate geometry or markers) |
    ///
    /// Code 5 (partial campaign failure) is issued by the campaign runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigMismatch(_) | Error::Parse(_) | Error::Config(_) => 2,
            Error::Io { .. } | Error::Format { .. } => 3,
            Error::Domain(_)
            | Error::Geometry(_)
            | Error::EmptyProfile(_)
            | Error::DegenerateConfiguration(_) => 4,
        }
    }
}
