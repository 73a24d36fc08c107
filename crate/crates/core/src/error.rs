use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("field of order {p}^{n} exceeds the enumeration guard of {limit} elements")]
    FieldTooLarge { p: u64, n: u32, limit: u64 },

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("polynomial over F_{p} of degree {n} is not irreducible")]
    ReducibleModulus { p: u32, n: u32 },

    #[error("zero has no discrete logarithm")]
    ZeroElement,

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("f is self-reciprocal up to a scalar (deg gcd(f, f*) = deg f); the closed genus formula does not apply")]
    SelfReciprocal,

    #[error("numerator and denominator share the root at {0}; the rational function is not reduced")]
    NotReduced(String),

    #[error("cover is reducible: h1^{a} * h2^{b} is a {n}-th power")]
    Reducible { a: i64, b: i64, n: u64 },

    #[error("pole of order {order} is divisible by the characteristic {p}")]
    WildPole { order: u64, p: u32 },

    #[error("unknown table id {0:?}")]
    UnknownTable(String),

    #[error("malformed record table row {line}: {reason}")]
    MalformedTable { line: usize, reason: String },

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn hypothesis(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}
