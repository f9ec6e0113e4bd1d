use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("F0 value {0} Hz outside 0 or [40, 2000]")]
    BadF0(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("zero-norm vector has no cosine distance")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("pool of {pool} vectors is smaller than M={m}")]
    PoolTooSmall { pool: usize, m: usize },
    #[error("pool is empty")]
    EmptyPool,
    #[error("input too short: {0}")]
    TooShort(String),
    #[error("no voiced region found")]
    NoVoicedRegion,
    #[error("need at least {needed} periods, found {found}")]
    TooFewPeriods { needed: usize, found: usize },
    #[error("mean amplitude is zero")]
    ZeroAmplitude,
    #[error("contour is entirely unvoiced")]
    AllUnvoiced,
    #[error("zero variance")]
    ZeroVariance,
    #[error("fewer than two jointly voiced frames")]
    NoOverlap,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty input")]
    Empty,
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("missing tensor `{0}`")]
    MissingTensor(String),
    #[error("tensor `{name}` has shape {got:?}, expected {expected:?}")]
    ShapeMismatch { name: String, expected: alloc::vec::Vec<usize>, got: alloc::vec::Vec<usize> },
    #[error("invalid data: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
