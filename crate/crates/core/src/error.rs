use thiserror::Error;

/// Errors raised by the certification library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is rank deficient (rank {rank}, expected {expected})")]
    RankDeficient { rank: usize, expected: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("subspaces are not nested: {0}")]
    NotNested(String),

    #[error("flag set mixes shapes or metrics")]
    MixedShapes,

    #[error("empty input: {0}")]
    Empty(String),

    #[error("matrix is not orthogonal for the ambient metric")]
    NotOrthogonal,

    #[error("vectors do not share one norm")]
    UnequalNorms,

    #[error("vector set is not closed under negation")]
    NotAntipodal,

    #[error("flag set is not a {0}-design")]
    NotADesign(u32),

    #[error("group elements have not been enumerated")]
    NotEnumerated,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            limit,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
