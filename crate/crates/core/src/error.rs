use alloc::string::String;

/// Errors raised by the simulation and response kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    Size { expected: usize, found: usize },

    #[error("qubit index error: {0}")]
    Index(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("outcome {outcome} on qubit {qubit} has probability {probability:e}")]
    ImpossibleOutcome {
        qubit: usize,
        outcome: bool,
        probability: f64,
    },

    #[error("excited-state preparation impossible: {0}")]
    PreparationImpossible(String),

    #[error("operator annihilates the input state (norm {norm:e})")]
    Annihilated { norm: f64 },

    #[error("response denominator vanishes at E = {energy} MeV")]
    PoleCrossing { energy: f64 },

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = core::result::Result<T, Error>;
