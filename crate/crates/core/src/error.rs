use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NaN is not an extended real number")]
    NotANumber,

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("location outside the grid closure: {0}")]
    Location(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{found} G-cells exceed the exhaustive-search bound of {bound}")]
    TooManyCells { found: usize, bound: usize },

    #[error("base dimension {found} not supported here (expected {expected})")]
    BaseDimension { found: usize, expected: usize },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("{0}")]
    Resolution(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
