use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("index {index} out of range (bound {bound})")]
    OutOfRange { index: usize, bound: usize },

    #[error("matrix of {entries} entries exceeds the materialization limit of {limit}")]
    TooLarge { entries: u128, limit: u64 },

    #[error("matrix is not of Boolean rank 1")]
    NotRankOne,

    #[error("rectangle index sets must be nonempty and strictly increasing")]
    MalformedRectangle,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}
