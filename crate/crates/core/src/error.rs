use std::path::PathBuf;

use thiserror::Error;

use crate::spectral::Mode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size K = {0}: must be a power of two, at least 4")]
    InvalidGrid(usize),

    #[error("grid mismatch: K = {left} vs K = {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("expected {expected} collocation samples, got {got}")]
    SampleCount { expected: usize, got: usize },

    #[error("mode ({}, {}) is outside the retained mode set of K = {k}", .mode.x, .mode.y)]
    ModeOutsideGrid { mode: Mode, k: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} needs {active} active modes, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        active: usize,
        budget: usize,
    },

    #[error("blow-up detected at t = {t}, last good time t = {last_good_t}")]
    BlowUp { t: f64, last_good_t: f64 },

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("missing required field `{0}`")]
    MissingField(&'static str),

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Errors raised while reading or validating a configuration.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::ConfigParse(_)
                | Error::MissingField(_)
                | Error::UnknownField(_)
                | Error::InvalidParameter { .. }
                | Error::InvalidGrid(_)
        )
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
