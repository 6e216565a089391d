use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("split must lie strictly between 0 and n")]
    InvalidSplit,
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("shift parameters must be pairwise distinct")]
    RepeatedShifts,
    #[error("shift parameters must be nonzero")]
    ZeroShift,
    #[error("linearly dependent vectors supplied")]
    DependentVectors,
    #[error("rank condition violated: found rank {found}, need at most {allowed}")]
    RankCondition { found: usize, allowed: usize },
    #[error("exact mode unsupported: {0}")]
    ExactUnsupported(String),
    #[error("the lower-right block must be lower triangular; conjugate the generator first")]
    NotLowerTriangular,
    #[error("point is outside the required stratum: {0}")]
    NotInStratum(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
