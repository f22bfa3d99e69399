use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group {group} has {size} samples, at least {required} required")]
    GroupTooSmall {
        group: usize,
        size: usize,
        required: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("at least {required} groups required, found {found}")]
    TooFewGroups { required: usize, found: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("variance estimate {0} is not positive; statistic cannot be standardized")]
    NonPositiveVariance(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("noise term of the asymptotic power is not positive ({0})")]
    DegenerateDenominator(f64),

    #[error("both signal terms are zero; ARE is undefined")]
    ZeroSignal,

    #[error("covariance summary is not homogeneous across groups")]
    HeterogeneousCovariance,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed CSV at line {line}: {reason}")]
    MalformedCsv { line: u64, reason: String },

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by the caller's data or configuration rather
    /// than by an internal failure.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
