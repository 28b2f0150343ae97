use thiserror::Error;

/// Errors raised by the partitioning and cutting pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("line has a zero direction vector (id {0})")]
    ZeroDirection(u64),
    #[error("vertical line {0} where a non-vertical one is required")]
    VerticalInput(u64),
    #[error("lines {0} and {1} have coincident xy-projections")]
    Degenerate(u64, u64),
    #[error("lines {0} and {1} intersect")]
    IntersectingLines(u64, u64),
    #[error("polynomial has degree 0 in z")]
    ZFree,
    #[error("line {0} is contained in the zero set")]
    LineInZeroSet(u64),
    #[error("projection of line {0} lies inside the discriminant curve")]
    ProjectionInDiscriminant(u64),
    #[error("dissection retry budget ({0}) exhausted")]
    RetryBudgetExhausted(usize),
    #[error("resample budget ({0}) exhausted")]
    ResampleBudgetExhausted(usize),
    #[error("interpolation space too small: binom(D+3,3) = {space} <= {constraints} constraints")]
    DimensionTooSmall { space: usize, constraints: usize },
    #[error("overlapping collinear segments {0} and {1}")]
    OverlappingSegments(usize, usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
