use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: String, modulus: u64 },

    #[error("residue {value} out of range for modulus {modulus}")]
    InvalidResidue { value: u64, modulus: u64 },

    #[error("exponent {e} does not divide the group order {order}")]
    ExponentNotDividing { e: u64, order: u64 },

    #[error("set size {size} is not a power of {p} within the {p}-part of the modulus")]
    SizeNotPrimePower { size: u64, p: u64 },

    #[error("elements of the set are not distinct modulo {0}")]
    DuplicateElements(u64),

    #[error("interval [-{k1},{k2}] is singular modulo {n} (gcd(n, k1!k2!) > 1)")]
    Singular { n: u64, k1: u32, k2: u32 },

    #[error("interval span {span} does not divide {n} - 1")]
    SpanDoesNotDivide { span: u32, n: u64 },

    #[error("modulus {n} exceeds the brute-force oracle bound {bound}")]
    OracleBoundExceeded { n: u64, bound: u64 },

    #[error("not a factorization: {0}")]
    NotAFactorization(String),

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("no perfect splitter set exists for this family: {0}")]
    Nonexistent(String),

    #[error("existence undecided: {0}")]
    Undecided(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("malformed set file: {0}")]
    MalformedSetFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
