use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the engine.
///
/// Mathematical failures (a dimension that disagrees with the expected value, a
/// missing skew pairing) are errors rather than panics so that drivers can
/// report the invariant that broke.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("differentials do not compose to zero at degree {0}")]
    NotAComplex(i32),
    #[error("truncation overflow: {0} product monomials fell inside the bound but outside the target space")]
    TruncationOverflow(usize),
    #[error("hypercohomology did not stabilize below truncation ceiling {ceiling}")]
    Unstable { ceiling: i32 },
    #[error("dim E_{k} = {found}, expected {expected}")]
    DimensionMismatch { k: i32, found: usize, expected: usize },
    #[error("the skewness system for the pairing has only the zero solution")]
    NoPairing,
    #[error("every solution of the pairing system (dimension {0}) is degenerate")]
    DegeneratePairing(usize),
    #[error("monad generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("the Pfaffian of the net vanishes identically")]
    ZeroPfaffian,
    #[error("parametrization is degenerate")]
    DegenerateParametrization,
    #[error("pulled-back monad is not exact along the curve")]
    PullbackDegenerate,
    #[error("search exhausted its budget of {0} attempts")]
    NotFound(usize),
    #[error("cross product is not divisible by the coordinate vector")]
    InconsistentDivision,
    #[error("t'' has rank {found}, expected {expected}")]
    RankMismatch { found: usize, expected: usize },
    #[error("operation needs a prime field")]
    NeedsPrimeField,
}
