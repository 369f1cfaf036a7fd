use thiserror::Error;

/// Errors surfaced by the clustering library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is disconnected: no path between nodes {0} and {1}")]
    DisconnectedGraph(usize, usize),

    #[error("edge ({0},{1}) has nonpositive weight {2}")]
    NonpositiveWeight(usize, usize, f64),

    #[error("point index {index} out of range for space with {len} points")]
    PointOutOfRange { index: usize, len: usize },

    #[error("ragged rows: row {row} has dimension {got}, expected {expected}")]
    RaggedRows { row: usize, got: usize, expected: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },

    #[error("probability weights sum to {0}, expected 1 within 1e-9")]
    BadMassTotal(f64),

    #[error("negative probability weight {weight} at point {index}")]
    NegativeMass { index: usize, weight: f64 },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "candidate budget exceeded: C({distinct},{k}) = {candidates} k-subsets > budget {budget}; \
         use the pam solver instead"
    )]
    BudgetExceeded { distinct: usize, k: usize, candidates: u128, budget: u128 },

    #[error("q = {q} too large for sample: no point attains the quantile level")]
    QTooLarge { q: f64 },

    #[error("stream too short for this (delta, constant): computed q = {q} >= {limit}")]
    StreamTooShort { q: f64, limit: f64 },

    #[error(
        "k = {k} exceeds the complexity guard {guard} (cost grows exponentially in k); \
         raise k_max_guard explicitly to override"
    )]
    KGuard { k: usize, guard: usize },

    #[error("dataset parse error at row {row}, column {col}: {msg}")]
    DatasetParse { row: usize, col: usize, msg: String },

    #[error("graph instance parse error at line {line}: {msg}")]
    GraphParse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("all {0} trials failed")]
    AllTrialsFailed(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
