use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // input / parse
    #[error("series have no common index range")]
    EmptyOverlap,
    #[error("series `{0}` still has missing values in the estimation range")]
    MissingUnresolved(String),
    #[error("series `{name}` is too short: need at least {need} observations, got {got}")]
    TooShort { name: String, need: usize, got: usize },
    #[error("series `{0}` contains a missing value")]
    MissingValue(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index column is not strictly increasing at row {row}")]
    NonMonotonicIndex { row: usize },
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("column `{0}` has non-positive values and cannot be log-transformed")]
    NonPositiveForLog(String),
    #[error("column `{0}` has a missing value at the sample boundary")]
    BoundaryMissing(String),
    #[error("io error: {0}")]
    Io(String),

    // specification
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("regressor `{0}` is not present in the dataset")]
    UnknownRegressor(String),
    #[error("insufficient data: {rows} usable rows for {cols} columns")]
    InsufficientData { rows: usize, cols: usize },
    #[error("models were fit on different samples ({0} vs {1} rows)")]
    SampleMismatch(usize, usize),
    #[error("future values for regressor `{0}` are missing or too short")]
    MissingFuture(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty input")]
    EmptyInput,
    #[error("no candidate specification could be fit")]
    NoFeasibleSpec,

    // numerical
    #[error("design matrix is rank deficient (rank {rank} of {cols})")]
    SingularDesign { rank: usize, cols: usize },
    #[error("residual variance is numerically zero")]
    DegenerateVariance,
    #[error("column `{0}` has zero variance and cannot be standardized")]
    ZeroVariance(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            EmptyOverlap
            | MissingUnresolved(_)
            | TooShort { .. }
            | MissingValue(_)
            | Parse(_)
            | NonMonotonicIndex { .. }
            | MissingColumn(_)
            | NonPositiveForLog(_)
            | BoundaryMissing(_)
            | Io(_) => 2,
            InvalidSpec(_)
            | InvalidConfig(_)
            | UnknownRegressor(_)
            | InsufficientData { .. }
            | SampleMismatch(..)
            | MissingFuture(_)
            | LengthMismatch(..)
            | EmptyInput
            | NoFeasibleSpec => 3,
            SingularDesign { .. } | DegenerateVariance | ZeroVariance(_) => 4,
            Internal(_) => 5,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
            _ => Error::Parse(e.to_string()),
        }
    }
}
