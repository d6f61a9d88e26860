use thiserror::Error;

/// Errors raised by the sailkit algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible number fields: {0}")]
    IncompatibleFields(String),
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("rays are collinear")]
    CollinearRays,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("points are collinear")]
    CollinearPoints,
    #[error("point lies on the subspace")]
    PointOnSubspace,
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("index {index} out of range ({available} available)")]
    OutOfRange { index: usize, available: usize },
    #[error("degenerate angle")]
    DegenerateAngle,
    #[error("integer sine is undefined for an angle with an irrational ray")]
    InfiniteSine,
    #[error("expected {expected} sequences, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("face is not planar")]
    NonPlanar,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("characteristic polynomial is reducible over Q")]
    ReducibleCharpoly,
    #[error("characteristic polynomial has non-real roots")]
    ComplexRoots,
    #[error("Dirichlet generators not found in coefficient box |c| <= {0}")]
    GeneratorsNotFound(i64),
    #[error("incomplete orbit coverage: {0}")]
    IncompleteOrbitCoverage(String),
    #[error("inconsistent minima: {0}")]
    InconsistentMinima(String),
    #[error("degenerate linear forms")]
    DegenerateForms,
    #[error("cross-ratio undefined: fewer than three distinct points")]
    UndefinedCrossRatio,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow")]
    Overflow,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
