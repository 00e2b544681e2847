use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or inconsistent experiment spec; names the offending key.
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("could not parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{0}")]
    Model(hetnet_core::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 config, 3 quadrature failure, 4 no covered trials, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use hetnet_core::Error as E;
        match self {
            CliError::Config { .. } | CliError::Parse { .. } => 2,
            CliError::Model(E::QuadratureFailure { .. }) => 3,
            CliError::Model(E::NoCoveredTrials) => 4,
            CliError::Model(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<hetnet_core::Error> for CliError {
    fn from(e: hetnet_core::Error) -> Self {
        CliError::Model(e)
    }
}
