use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("complex is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("complex is not cubical: {0}")]
    NotCubical(String),

    #[error("subset is not down-closed: {0}")]
    NotDownClosed(String),

    #[error("poset is not graded: {0}")]
    NotGraded(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("invalid coloring: {0}")]
    Coloring(String),

    #[error("palette too small: need at least {need} colors, got {got}")]
    PaletteTooSmall { need: usize, got: usize },

    #[error("not a combinatorial sphere: {0}")]
    NotSphere(String),

    #[error("pair ({0}, {1}) is not free")]
    NotFreePair(String, String),

    #[error("invalid collapse step {index}: {reason}")]
    InvalidStep { index: usize, reason: String },

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("malformed tower: {0}")]
    TowerShape(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 input, 3 verification, 4 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExhausted(_) => 4,
            Error::VerificationFailed(_) | Error::InvalidStep { .. } => 3,
            _ => 2,
        }
    }
}
