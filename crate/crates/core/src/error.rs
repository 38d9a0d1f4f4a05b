use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polytope is unbounded along coordinate {coordinate}")]
    UnboundedPolytope { coordinate: usize },

    #[error("cone {cone:?} is not simplicial: {rays} rays span a space of rank {rank}")]
    NotSimplicial {
        cone: Vec<usize>,
        rays: usize,
        rank: usize,
    },

    #[error("rays span a space of rank {rank} < {dim}: the variety has a torus factor")]
    TorusFactor { rank: usize, dim: usize },

    #[error("cones {first:?} and {second:?} do not meet along a common face")]
    NotAFan {
        first: Vec<usize>,
        second: Vec<usize>,
    },

    #[error("fan is not complete: {0}")]
    NotComplete(String),

    #[error("expected {expected} divisor factors, got {got}")]
    WrongDegree { expected: usize, got: usize },

    #[error("hypersurface classes do not sum to the anticanonical class")]
    AdjunctionFailed,

    #[error("top Chern number {0} is not an integer")]
    NonIntegerEuler(String),

    #[error("signature term {0} is not divisible by 45")]
    NonIntegerSignatureTerm(String),

    #[error("Koszul chase is indeterminate for {what}: bounds {lower:?}..{upper:?}")]
    IndeterminateChase {
        what: String,
        lower: Vec<u64>,
        upper: Vec<u64>,
    },

    #[error("smoothness of the forgetful morphism is not certified: {0}")]
    NotCertified(String),

    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),

    #[error("input rejected: {0}")]
    Rejected(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("weighted projective configuration {0:?} does not yield primitive rays")]
    NonPrimitiveConfiguration(Vec<i64>),
}
