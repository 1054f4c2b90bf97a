use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no primitive direction")]
    ZeroVector,
    #[error("shear direction not fixed by normal")]
    ShearNotFixed,
    #[error("mismatched grading or order")]
    GradingMismatch,
    #[error("non-convergent direction")]
    NonConvergent,
    #[error("not unimodular: determinant {0}")]
    NotUnimodular(i64),
    #[error("infinite type not supported")]
    InfiniteType,
    #[error("basis is not unimodular")]
    BadBasis,
    #[error("loop passes through a singular point")]
    LoopThroughSingularity,
    #[error("completion did not stabilize (likely infinite type)")]
    CompletionUnstable,
    #[error("walls not concurrent")]
    NotConcurrent,
    #[error("cut crosses a wall at {0}")]
    CutCrossesWall(String),
    #[error("invariant direction not parallel to the wall")]
    NotParallel,
    #[error("move blocked: {0}")]
    MoveBlocked(String),
    #[error("endpoint not generic")]
    NotGeneric,
    #[error("monotone point undetermined")]
    MonotoneUndetermined,
    #[error("frozen node cannot mutate")]
    FrozenNode,
    #[error("non-Delzant vertex")]
    NotDelzant,
    #[error("parameter too large: {0}")]
    TooLarge(String),
    #[error("slide leaves the diagram")]
    SlideOff,
    #[error("non-collinear group")]
    NonCollinear,
    #[error("unknown catalog entry {0}")]
    UnknownCatalog(String),
    #[error("mutation graph exceeded {0} classes")]
    GraphUnbounded(usize),
    #[error("index {0} out of range")]
    Index(usize),
    #[error("invalid polygon: {0}")]
    BadPolygon(String),
    #[error("cut crosses the boundary non-transversally")]
    CutTangent,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
