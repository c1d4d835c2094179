use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("element code {code} out of range for GF({q})")]
    ElementOutOfRange { code: u32, q: u32 },
    #[error("Frobenius exponent {t} out of range 0..{m}")]
    FrobeniusExponent { t: u32, m: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("singular matrix")]
    Singular,
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("vertex index {v} out of range (vertex count {count})")]
    VertexOutOfRange { v: u64, count: u64 },
    #[error("{what} has {count} vertices, above the cap of {cap}")]
    CapExceeded { what: String, count: u128, cap: u64 },
    #[error("expected an ideal of rank {expected}, got rank {got}")]
    WrongRank { expected: usize, got: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
