use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector norm {norm} is not within 1e-6 of 1")]
    NotUnitNorm { norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("too many candidates for exact search: {count} > {limit}")]
    TooManyCandidates { count: usize, limit: usize },

    #[error("degenerate separation angle {psi} exceeds pi")]
    DegenerateSeparation { psi: f64 },

    #[error("intra-identity condition violated: 2*rho = {two_rho} > arccos(tau) = {limit}")]
    IntraConditionViolated { two_rho: f64, limit: f64 },

    #[error("identity mean has near-zero norm {norm}")]
    DegenerateMean { norm: f64 },

    #[error("index {index} out of range for {len} identities")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("ROC table is not monotone: {0}")]
    NonMonotoneTable(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input, as opposed to failures that
    /// surface while computing on otherwise valid input.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::DegenerateSeparation { .. } | Error::DegenerateMean { .. } | Error::Io(_)
        )
    }

    /// Short machine-parsable code for diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "E_DIM",
            Error::NotUnitNorm { .. } => "E_NORM",
            Error::InvalidParameter { .. } => "E_PARAM",
            Error::Empty(_) => "E_EMPTY",
            Error::TooManyCandidates { .. } => "E_EXACT_LIMIT",
            Error::DegenerateSeparation { .. } => "E_DEGENERATE_PSI",
            Error::IntraConditionViolated { .. } => "E_INTRA",
            Error::DegenerateMean { .. } => "E_ZERO_MEAN",
            Error::IndexOutOfRange { .. } => "E_INDEX",
            Error::NonMonotoneTable(_) => "E_ROC",
            Error::Parse { .. } => "E_PARSE",
            Error::Io(_) => "E_IO",
            Error::Json(_) => "E_JSON",
            Error::Csv(_) => "E_CSV",
        }
    }
}
