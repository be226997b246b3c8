use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("column {column} is constant and cannot be rescaled")]
    DegenerateColumn { column: usize },

    #[error("covariance matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    FactorizationFailure { min_eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no positive rate solves the schedule equation for k_max = {k_max}, m = {m}")]
    NoRoot { k_max: usize, m: usize },

    #[error("integrand is not finite at point {index}")]
    NonFiniteIntegrand { index: usize },

    #[error("reference value is zero, relative error undefined")]
    ZeroReference,

    #[error("tensor grid would have {nodes} nodes, cap is {cap}")]
    GridTooLarge { nodes: u128, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateColumn { .. } => "DegenerateColumn",
            Error::FactorizationFailure { .. } => "FactorizationFailure",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NoRoot { .. } => "NoRoot",
            Error::NonFiniteIntegrand { .. } => "NonFiniteIntegrand",
            Error::ZeroReference => "ZeroReference",
            Error::GridTooLarge { .. } => "GridTooLarge",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
