use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("value {value} is not on the grid (step {delta}, upper bound {h})")]
    OffGrid { value: String, delta: String, h: String },

    #[error("cannot parse money value {0:?}")]
    BadNumber(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("space too large: more than {bound} allocations")]
    SpaceTooLarge { bound: usize },

    #[error("no feasible allocation: {0}")]
    Infeasible(String),

    #[error(
        "sweep budget exceeded: {required} evaluations needed, limit is {limit} (completed agents: {completed:?})"
    )]
    BudgetExceeded { limit: u64, required: u64, completed: Vec<usize> },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
