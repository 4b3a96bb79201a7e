use thiserror::Error;

/// Errors produced anywhere in the detection and risk pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid GARCH parameters: {0}")]
    InvalidParams(String),

    #[error("conditional variance became non-finite at index {index}")]
    Explosion { index: usize },

    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("degenerate series (zero sample variance)")]
    Degenerate,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("segment {segment} is too short for a covariance estimate ({len} rows, {dim} series)")]
    SegmentTooShort { segment: usize, len: usize, dim: usize },

    #[error("Cholesky factorization failed for segment {segment}")]
    Cholesky { segment: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("unknown scenario model `{0}`")]
    UnknownModel(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Json(_) => 2,
            Error::Config(_) | Error::InvalidArgument(_) | Error::UnknownModel(_) => 4,
            Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
