use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Z_n order {0}: need n >= 2")]
    InvalidOrder(usize),

    #[error("operation is only defined for n = {expected}, got n = {got}")]
    UnsupportedOrder { expected: usize, got: usize },

    #[error("chain must have at least one site")]
    EmptyChain,

    #[error("site {site} out of range 1..={len}")]
    SiteOutOfRange { site: usize, len: usize },

    #[error("basis index {index} out of range for n = {order}")]
    BasisIndexOutOfRange { index: usize, order: usize },

    #[error("chi eigenbasis is only closed-form for odd n, got n = {0}")]
    EvenChiBasis(usize),

    #[error("Hilbert space dimension {dim} exceeds the dense limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("vector has zero norm")]
    ZeroNorm,

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    #[error("overlap vanishes ({magnitude:.3e}); phase is undefined")]
    VanishingOverlap { magnitude: f64 },

    #[error("evolution annihilated the state")]
    OrthogonalEvolution,

    #[error("state has no weight in the logical subspace")]
    FullyLeaked,

    #[error("KCBS settings {first} and {second} are not orthogonal (overlap {overlap:.3e})")]
    IncompatibleSettings {
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error("KCBS value {0} exceeds the quantum maximum sqrt(5)")]
    KcbsAboveQuantumBound(f64),

    #[error("KCBS value {0} is negative")]
    NegativeKcbs(f64),

    #[error("process fit did not converge after {iterations} iterations (residual {residual:.3e})")]
    FitFailure { iterations: usize, residual: f64 },

    #[error("shots must be positive")]
    ZeroShots,

    #[error("negative or non-finite probability {0}")]
    InvalidProbability(f64),

    #[error("target is not realizable: {0}")]
    InfeasibleTarget(String),

    #[error("routing collision: two sub-beams map to output {output}, slot {slot}")]
    RoutingCollision { output: usize, slot: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
