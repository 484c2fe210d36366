use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("rank {0} exceeds the enumeration guard")]
    RankTooLarge(usize),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("generator index {0} out of range for rank {1}")]
    BadGenerator(usize, usize),
    #[error("element {0} is not the shortest member of its double coset")]
    NotMinimalRep(String),
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("split ({0},{1}) does not add up to rank {2}")]
    BadSplit(usize, usize, usize),
    #[error("linear system for the idempotent is singular")]
    NotInvertible,
    #[error("invalid index word: {0}")]
    InvalidIndex(String),
    #[error("map is rank deficient: rank {rank} < {expected}")]
    SingularMap { rank: usize, expected: usize },
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("rank {0} too small: need floor(n/2) >= d")]
    RankTooSmall(usize),
    #[error("restriction map is not invertible")]
    InvertibilityFailure,
    #[error("product left the span of the basis: {0}")]
    ExpansionFailure(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("cell axiom {axiom} fails at {witness}")]
    AxiomFailure { axiom: String, witness: String },
    #[error("unsupported parameter regime: {0}")]
    UnsupportedRegime(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
