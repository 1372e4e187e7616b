use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Invalid(String),

    #[error("scenario `{scenario}`: {source}")]
    Numerical {
        scenario: String,
        #[source]
        source: spinboson_core::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps a core failure. Parameter-domain errors are configuration
    /// problems; everything else is numerical.
    pub(crate) fn from_core(scenario: &str, err: spinboson_core::Error) -> Self {
        use spinboson_core::Error as E;
        match err {
            E::Domain(_) | E::Config(_) | E::SingularTransformation => {
                Self::Invalid(format!("scenario `{scenario}`: {err}"))
            }
            source => Self::Numerical {
                scenario: scenario.to_string(),
                source,
            },
        }
    }

    /// Process exit code: 2 for configuration problems, 3 for numerical
    /// failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Invalid(_) => 2,
            Self::Numerical { .. } => 3,
            Self::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
