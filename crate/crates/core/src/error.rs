use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("arity: {0}")]
    Arity(String),
    #[error("inhomogeneous: {0}")]
    Inhomogeneous(String),
    #[error("degree {degree} beyond cap {cap}")]
    BeyondCap { degree: u32, cap: u32 },
    #[error("ring mismatch")]
    RingMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rank: {0}")]
    Rank(String),
    #[error("genus too small: {0}")]
    GenusTooSmall(i64),
    #[error("coefficient vanishes")]
    CoefficientVanishes,
    #[error("parity mismatch: Maroni value {n} has the wrong parity for genus {g}")]
    Parity { g: i64, n: i64 },
    #[error("sampling failed after {0} attempts")]
    SamplingFailed(usize),
    #[error("degenerate pencil ({0}); retry with new seed")]
    DegeneratePencil(String),
    #[error("curve is not smooth")]
    NotSmooth,
    #[error("degenerate sample point: {0}")]
    DegenerateSample(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
