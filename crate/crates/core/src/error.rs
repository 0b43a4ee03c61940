use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice dimensions {width}x{length} too small (need width >= 2 and length >= 2)")]
    DimensionTooSmall { width: usize, length: usize },

    #[error("enumeration over 2^{edges} colourings exceeds the cap of 2^{cap}")]
    EnumerationTooLarge { edges: usize, cap: usize },

    #[error("cannot evaluate a polynomial with negative exponents at zero")]
    ZeroEvaluation,

    #[error("Euler relation violated for colouring {mask:#x}: {detail}")]
    InternalEulerViolation { mask: u64, detail: String },

    #[error("topological invariant violated for colouring {mask:#x}: {detail}")]
    InternalTopologyViolation { mask: u64, detail: String },

    #[error("invalid parity/twist combination: {0}")]
    InvalidParityCombination(String),

    #[error("exact backend cannot represent this coupling: {0}")]
    BackendMismatch(String),

    #[error("twist incompatible with Q: {0}")]
    TwistIncompatible(String),

    #[error("dual transfer matrix needs a non-zero temperature variable")]
    ZeroTemperatureVariable,

    #[error("partition function vanishes at the evaluation point")]
    ZeroPartitionFunction,

    #[error("eigenvalue computation failed: {0}")]
    DiagonalizationFailure(String),

    #[error("inconsistent table metadata: {0}")]
    InconsistentMetadata(String),

    #[error("identity not applicable: {0}")]
    InapplicableParameters(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
