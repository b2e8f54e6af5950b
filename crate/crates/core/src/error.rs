use thiserror::Error;

/// Errors raised by the algebra routines.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("entry {entry} is not in Z[1/{modulus}]")]
    NotLocalized { entry: String, modulus: u64 },
    #[error("matrix has non-integral entries")]
    NotIntegral,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid group presentation: {0}")]
    InvalidGroup(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("prime lists differ: {left:?} vs {right:?}")]
    PrimeMismatch { left: Vec<u64>, right: Vec<u64> },
    #[error("coefficient rings differ: Z[1/{left}] vs Z[1/{right}]")]
    RingMismatch { left: u64, right: u64 },
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("rewrite completion failed on {0}")]
    Completion(String),
    #[error("prime index {index} out of range for {count} primes")]
    PrimeIndex { index: usize, count: usize },
    #[error("module is not exact: {0}")]
    NotExact(String),
    #[error("module component is not free over the coefficient ring: {0}")]
    NotFree(String),
    #[error("kernel of the free cover is not exact and free: {0}")]
    ResolutionDefect(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no section found: {0}")]
    NoSection(String),
    #[error("splitting needs at least two primes, got {0}")]
    TooFewPrimes(usize),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("not uniquely {prime}-divisible: {detail}")]
    NotDivisible { prime: u64, detail: String },
    #[error("{q} does not divide {p} - 1")]
    NoRootOfUnity { p: u64, q: u64 },
    #[error("component order exceeds bound {0}")]
    BoundExceeded(u64),
    #[error("no isomorphism found: {0}")]
    NoIsomorphism(String),
}

pub type Result<T> = std::result::Result<T, Error>;
