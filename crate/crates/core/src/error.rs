use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0:?} is not irreducible")]
    NotIrreducible(Vec<u32>),
    #[error("field size {0} exceeds the supported maximum 2^20")]
    FieldTooLarge(u64),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(String),
    #[error("division by zero")]
    DivisionByZero,

    #[error("k = {k} is larger than n = {n}")]
    KOutOfRange { n: u64, k: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspaces live in different ambient spaces (n = {0} vs n = {1})")]
    AmbientMismatch(usize, usize),
    #[error("{count} subspaces exceed the resource guard of {limit}")]
    TooManySubspaces { count: String, limit: u64 },
    #[error("operation needs a nonempty subspace")]
    EmptySubspace,

    #[error("blocks disagree on parameters: {0}")]
    MixedParameters(String),
    #[error("the SCID has not been verified")]
    NotVerified,
    #[error("cannot place more than {placed} of {requested} blocks")]
    CannotPlace { placed: usize, requested: usize },
    #[error("the SCID is a sunflower")]
    IsSunflower,
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("q = {0} is too small (need q >= 7)")]
    QTooSmall(f64),

    #[error("no feasible (c, d) point on the search grid")]
    NoFeasiblePoint,

    #[error("unknown inequality {0:?}")]
    UnknownInequality(String),
    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("format error: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
