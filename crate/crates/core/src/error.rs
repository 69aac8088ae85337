use thiserror::Error;

/// Errors surfaced by the simulator, the scrambler scenario, and the search
/// driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} outside the supported range 1..={limit}")]
    Capacity { n: usize, limit: usize },

    #[error("bit index {j} outside 1..={n}")]
    BitIndex { j: usize, n: usize },

    #[error("basis state {x} out of range for {n} qubits")]
    BasisIndex { x: u64, n: usize },

    #[error("state norm^2 drifted to {norm_sqr} (|1 - norm^2| = {drift:e}); refusing to continue")]
    NormDrift { norm_sqr: f64, drift: f64 },

    #[error("qubit count mismatch: expected {expected}, got {actual}")]
    QubitMismatch { expected: usize, actual: usize },

    #[error("target weight {lambda} outside (0, 1]")]
    LambdaDomain { lambda: f64 },

    #[error("stage index {ell} outside 0..={n}")]
    StageIndex { ell: usize, n: usize },

    #[error("scrambler instance requires at least 2 key bits, got {n}")]
    InvalidInstance { n: usize },

    #[error("permutation is not a bijection over 0..{n}")]
    InvalidPermutation { n: usize },

    #[error("enumeration supported only up to {limit} bits, got {n}")]
    EnumerationBound { n: usize, limit: usize },

    #[error("one-count {count} exceeds shot count {shots}")]
    CountRange { count: u64, shots: u64 },

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("probability {p} outside [0, 1]")]
    ProbabilityDomain { p: f64 },

    #[error("model must describe at least one bit")]
    EmptyModel,

    #[error("bits_per_stage must be 1 or 2, got {bits}")]
    BitsPerStage { bits: usize },

    #[error("invalid {field} in record: {reason}")]
    InvalidRecord { field: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
