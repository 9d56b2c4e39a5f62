use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dictionary spec: {0}")]
    InvalidSpec(String),

    #[error("bit vector has length {actual}, dictionary has {expected} candidates")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("model structure is empty")]
    EmptyStructure,

    #[error("not enough samples: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("regressor matrix is rank deficient")]
    RankDeficient,

    #[error("need more rows than parameters (rows = {rows}, parameters = {params})")]
    TooFewRows { rows: usize, params: usize },

    #[error("no candidate structure produced a valid model")]
    NoValidStructure,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),

    #[error("channel `{0}` is constant on the identification split")]
    ConstantChannel(&'static str),

    #[error("cannot parse regressor term `{0}`")]
    TermParse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("report: {0}")]
    Report(String),
}
