use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("epsilon0 must be a finite positive number, got {0}")]
    NonPositiveEpsilon0(f64),
    #[error("k must be at least 2, got {0}")]
    BadAlphabet(usize),
    #[error("pi is not a probability vector: {0}")]
    BadDistribution(String),
    #[error("n must be at least 1, got {0}")]
    BadSize(u64),
    #[error("element index {index} is out of range for k = {k}")]
    BadElement { index: usize, k: usize },
    #[error("target pair must name two distinct elements, got ({0}, {0})")]
    DegeneratePair(usize),
    #[error("epsilon0 and epsilon must both be positive, got epsilon0 = {epsilon0}, epsilon = {epsilon}")]
    NonPositiveInput { epsilon0: f64, epsilon: f64 },
    #[error("epsilon must be a finite positive number, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("epsilon must be a finite non-negative number, got {0}")]
    NegativeEpsilon(f64),
    #[error("delta target must lie in (0, 1), got {0}")]
    BadDeltaTarget(f64),
    #[error("search interval must satisfy 0 < lo < hi, got ({lo}, {hi})")]
    BadInterval { lo: f64, hi: f64 },
    #[error("dataset has {got} entries, expected {expected}")]
    BadDataset { expected: usize, got: usize },
    #[error("exact oracle limited to n <= {max_n} and k <= {max_k}, got n = {n}, k = {k}")]
    TooLarge {
        n: usize,
        k: usize,
        max_n: usize,
        max_k: usize,
    },
    #[error("distributions are over different (n, k): ({0}, {1}) vs ({2}, {3})")]
    MismatchedSupport(usize, usize, usize, usize),
    #[error("sample count must be at least 1")]
    NoSamples,
}
