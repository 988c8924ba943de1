use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed shape string {0:?}")]
    MalformedShape(String),
    #[error("polygon shapes need at least 3 sides, got {0}")]
    TooFewSides(usize),
    #[error("segment configurations need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("point z_({side},{offset}) does not exist in this configuration")]
    PointOutOfRange { side: usize, offset: usize },
    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("blocks overlap")]
    OverlappingBlocks,
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("element index {0} out of range")]
    ElementOutOfRange(usize),
    #[error("configurations are not comparable in the hull poset")]
    NotComparable,
    #[error(
        "no blank side: a symmetric chain decomposition needs a hull side without internal points"
    )]
    NoBlankSide,
    #[error("invalid alpha/beta parameters: {0}")]
    InvalidAlphaBeta(String),
    #[error("not noncrossing: {0}")]
    NotNoncrossing(String),
    #[error("invalid chain decomposition input: {0}")]
    InvalidChains(String),
    #[error("malformed edge list: {0}")]
    MalformedEdges(String),
    #[error("forest precondition failed: {0}")]
    InvalidForest(String),
    #[error("edges {0:?} and {1:?} do not share exactly one vertex")]
    SlideNotIncident((usize, usize), (usize, usize)),
    #[error("edges {0:?} and {1:?} are not adjacent around their shared vertex")]
    SlideNotAdjacent((usize, usize), (usize, usize)),
    #[error("slide leaves the noncrossing class: {0}")]
    SlideLeavesNoncrossing(String),
    #[error("partition {0} is not in the Boolean subposet of the tree")]
    NotInBool(String),
    #[error("{0} is not an atom")]
    NotAnAtom(usize),
    #[error("invalid hull element: {0}")]
    InvalidHullElement(String),
    #[error("hull element operation precondition failed: {0}")]
    HullPrecondition(String),
    #[error("collapse repair precondition failed: {0}")]
    RepairPrecondition(String),
    #[error("collapse repair produced no certified tree: {0}")]
    RepairFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
