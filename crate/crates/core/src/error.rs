use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("label budget exhausted after {0} requests")]
    BudgetExhausted(usize),

    #[error("stream index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("empty sample")]
    EmptySample,

    #[error("empty version space")]
    EmptyVersionSpace,

    #[error("region has {0} pieces, more than the supported maximum")]
    RegionOverflow(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not enough points to fit: {0} usable, need at least 3")]
    TooFewPoints(usize),

    #[error("nested structure violated: {0}")]
    NotNested(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),

    #[error("replay mismatch at line {line}: expected `{expected}`, got `{got}`")]
    ReplayMismatch {
        line: usize,
        expected: String,
        got: String,
    },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
