use thiserror::Error;

use crate::experiment_runner::config::ConfigError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid model or scenario parameters.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Argument outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no feasible altitude: coverage radius is 0 at every searched altitude")]
    NoFeasibleAltitude,

    #[error("no placement: {0}")]
    NoPlacement(String),

    #[error("reservoir construction failed: {0}")]
    Construction(String),

    #[error("singular normal matrix: {0}")]
    Singular(String),

    #[error("model is not trained")]
    Untrained,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error on line {line}: {message}")]
    Validation { line: usize, message: String },

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input (config, files, parameters)
    /// rather than by a run that could not complete.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Configuration(_)
                | Error::Parse { .. }
                | Error::Validation { .. }
                | Error::Config(_)
        )
    }
}
