use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator rows are linearly dependent (rank {rank} < {k})")]
    DependentRows { rank: usize, k: usize },
    #[error("generator matrix is not in systematic form")]
    NotSystematic,
    #[error("code has k = n, its dual is trivial")]
    FullDimensionCode,
    #[error("bad code dimensions n = {n}, k = {k}")]
    BadDimensions { n: usize, k: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("walker initialization failed after {retries} draws")]
    InitFailure { retries: usize },
    #[error("walk produced no recorded samples")]
    NoSamples,
    #[error("all coefficient bits are frozen")]
    NoFreeBits,
    #[error("sample list is empty")]
    EmptySamples,
    #[error("overlap is zero, Hadamard test cannot resolve it")]
    ZeroOverlap,
    #[error("ISD exhausted {0} trials")]
    TrialsExhausted(u64),
    #[error("descent stalled at estimated overlap {0}")]
    Stalled(f64),
    #[error("walker cache drifted from recomputed value at step {0}")]
    CacheDrift(u64),
    #[error("verification failed: {0}")]
    VerificationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
