use thiserror::Error;

/// Everything that can go wrong when validating inputs or running a check.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square with dim >= 1 (got {rows}x{cols})")]
    Shape { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("not a positive contraction: eigenvalue {eigenvalue} outside [0, 1]")]
    NotPositiveContraction { eigenvalue: f64 },

    #[error("expected a norm-one element, got operator norm {norm}")]
    NotNormOne { norm: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("not a projection: ||p^2 - p|| = {defect:e}")]
    NotProjection { defect: f64 },

    #[error("expected a rank-one projection, got rank {rank}")]
    NotRankOne { rank: usize },

    #[error("vector has zero norm or is not normalized (norm {norm})")]
    BadVector { norm: f64 },

    #[error("invalid piecewise-linear function: {0}")]
    InvalidFunction(String),

    #[error("invalid tail basis: {0}")]
    InvalidBasis(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("diagonal operator is not compact (tail {0})")]
    NonCompact(&'static str),

    #[error("invalid diagonal operator: {0}")]
    InvalidDiagonal(String),

    #[error("point is not on the grid: {0}")]
    NotOnGrid(String),

    #[error("not unitary: ||u u* - 1|| = {defect:e}")]
    NotUnitary { defect: f64 },

    #[error("refusing oversized request: {0}")]
    SizeRefused(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
