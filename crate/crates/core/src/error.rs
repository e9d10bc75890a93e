use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not full row rank")]
    NotFullRowRank,
    #[error("not full column rank")]
    NotFullColumnRank,
    #[error("zero vector")]
    ZeroVector,
    #[error("empty polyhedron")]
    EmptyPolyhedron,
    #[error("degenerate scale: scaling an unbounded polyhedron by 0")]
    DegenerateScale,
    #[error("infinite lattice width: every P_b contains integral points")]
    InfiniteLatticeWidth,
    #[error("flatness constant not configured for dimension {0}")]
    FlatnessNotConfigured(usize),
    #[error("dimension {0} exceeds the configured maximum {1}")]
    DimensionTooLarge(usize, usize),
    #[error("point is not in the region")]
    NotInRegion,
    #[error("denominator bound too small")]
    DenominatorBoundTooSmall,
    #[error("gap exceeds cap {0}")]
    GapExceedsCap(String),
    #[error("no feasible grid point")]
    NoFeasibleGridPoint,
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
}

impl Error {
    /// Errors caused by configured limits rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::FlatnessNotConfigured(_)
                | Error::DimensionTooLarge(..)
                | Error::LimitExceeded(_)
                | Error::GapExceedsCap(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
