use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid calibration: gl_max ({gl_max}) must exceed gl_min ({gl_min})")]
    InvalidCalibration { gl_min: f64, gl_max: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("field has value kind {found:?}, expected {expected:?}")]
    WrongValueKind {
        expected: crate::grid::ValueKind,
        found: crate::grid::ValueKind,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: cell {cell}: {message}")]
    BadCell {
        path: PathBuf,
        cell: usize,
        message: String,
    },

    #[error("kriging system is singular: {0}")]
    SingularKriging(String),

    #[error("metric error: {0}")]
    Metric(String),

    #[error("problem too large: {cells} cells exceeds the budget of {budget}")]
    SizeBudget { cells: usize, budget: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
