use thiserror::Error;

/// Errors produced by state construction, simulation, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("state would need {amplitudes} amplitudes, budget is {budget}")]
    MemoryBudget { amplitudes: u64, budget: u64 },

    #[error("state is not normalized: total squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("matrix is not unitary: max deviation {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("projector is not valid: {0}")]
    InvalidProjector(String),

    #[error("impossible outcome: projection probability {probability:.3e} below threshold")]
    ImpossibleOutcome { probability: f64 },

    #[error("dimension {dim} too large for dense matrix materialization (max {max})")]
    DenseTooLarge { dim: u64, max: u64 },

    #[error("invalid problem family: {0}")]
    InvalidFamily(String),

    #[error("unsupported family parameters: {0}")]
    UnsupportedFamily(String),

    #[error("incompatible initial preparation: {0}")]
    IncompatiblePreparation(String),

    #[error("invalid knowledge state: {0}")]
    InvalidKnowledge(String),

    #[error("invalid half table: {0}")]
    InvalidHalfTable(String),

    #[error("query argument {argument} lies inside the half table")]
    QueryInsideHalfTable { argument: String },

    #[error("reconstruction failed: residual {residual:.3e} above tolerance {tolerance:.3e}")]
    ReconstructionFailure { residual: f64, tolerance: f64 },

    #[error("iteration limit {limit} exceeded without finding {needed} independent strings")]
    IterationLimit { limit: u32, needed: u32 },

    #[error("internal consistency violated: {0}")]
    Inconsistent(String),

    #[error("GF(2) solve failed: {0}")]
    Gf2(String),

    #[error("malformed family file: {0}")]
    MalformedFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
