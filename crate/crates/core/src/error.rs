use thiserror::Error;

/// Errors raised by the state calculus, the entropy functionals and the estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (Frobenius distance to adjoint {distance:.3e})")]
    NotHermitian { distance: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("bad shape: {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("bad subsystem set {traced:?} for {arity} subsystems")]
    BadSubsystemSet { traced: Vec<usize>, arity: usize },

    #[error("expected {expected} subsystems, found {found}")]
    BadArity { expected: usize, found: usize },

    #[error("rank {rank} incompatible with limit {max}")]
    BadRank { rank: usize, max: usize },

    #[error("weight mismatch: {0}")]
    WeightMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("{perm:?} is not a permutation of 0..{arity}")]
    BadPermutation { perm: Vec<usize>, arity: usize },

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("witness is degenerate: S(rho2) = {entropy:.3e}, bound ratio undefined")]
    DegenerateWitness { entropy: f64 },

    #[error("decomposition does not reconstruct its target (residual {residual:.3e})")]
    BadDecomposition { residual: f64 },

    #[error("bound sandwich violated: {0}")]
    SandwichViolation(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
