use thiserror::Error;

use crate::algebra::ParseError;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unsupported schema version {0:?}")]
    Version(String),
    #[error(transparent)]
    Polynomial(#[from] ParseError),
    #[error("space is not valid GKM data: {0}")]
    NotGkm(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("test vector is degenerate: weight {0} pairs to zero")]
    DegenerateXi(String),
    #[error("degenerate pole configuration in the chosen frame")]
    DegenerateConfiguration,
    #[error("exponent has zero coefficient on the active variable")]
    ZeroExponentCoefficient,
    #[error("point {0} is a singular value (lies on a wall)")]
    SingularValue(String),
    #[error("point {0} lies outside the moment polytope")]
    OutsidePolytope(String),
    #[error("no generic frame found: {0}")]
    GenericityFailure(String),
    #[error("walls need an edge list or a wall override")]
    MissingSkeleton,
    #[error("chamber enumeration is unsupported in rank {0}")]
    UnsupportedRank(usize),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("points lie in the same chamber")]
    SameChamber,
    #[error("distinguishing construction failed: {0}")]
    ConstructionFailure(String),
    #[error("normal weight {0} has zero circle weight")]
    ZeroSWeight(String),
    #[error("segment crosses more than one wall")]
    MultipleWalls,
    #[error("segment crosses no wall")]
    NoWall,
    #[error("ray meets a codimension-2 stratum: {0}")]
    RayDegeneracy(String),
    #[error("unknown fixed point {0:?}")]
    UnknownFixedPoint(String),
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
