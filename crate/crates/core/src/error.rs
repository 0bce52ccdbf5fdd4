use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero input where a nonzero value is required: {0}")]
    Zero(&'static str),
    #[error("{0} is not an odd prime")]
    NotOddPrime(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("prime factor {0} does not fit in 64 bits")]
    PrimeTooLarge(String),
    #[error("could not parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("degenerate symmetric matrix (rank {rank} < {dim})")]
    Degenerate { rank: usize, dim: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no generator found after {trials} trials (height bound {height})")]
    GeneratorSearch { trials: usize, height: i64 },
    #[error("scalar search exhausted after {candidates} candidates")]
    ScalarSearchExhausted { candidates: usize },
    #[error("determinant class mismatch: algebra {algebra}, target {target}")]
    DeterminantMismatch { algebra: String, target: String },
    #[error("criterion not applicable: {0}")]
    NotApplicable(String),
    #[error("inconsistent local data: {0}")]
    InconsistentLocalData(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
