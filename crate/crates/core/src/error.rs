use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by grid construction, the solvers and the reporting layer.
#[derive(Debug, Error)]
pub enum HjError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("initialization failed: {0}")]
    Initialization(String),

    #[error("non-finite value encountered at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("problem {0} has no closed-form solution")]
    NoClosedForm(String),

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("error mask selects no grid points")]
    EmptyMask,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, HjError>;
