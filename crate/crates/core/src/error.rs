use thiserror::Error;

/// A transition identified by its `(lower, upper)` level indices.
pub type LevelPair = (usize, usize);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid level system: {0}")]
    InvalidSystem(String),

    #[error("invalid field specification: {0}")]
    InvalidField(String),

    #[error(
        "degenerate Bohr frequency: lines {first:?} and {second:?} are closer than {tol:e} \
         (omega {omega_first} vs {omega_second})"
    )]
    DegenerateBohrFrequency {
        first: LevelPair,
        second: LevelPair,
        omega_first: f64,
        omega_second: f64,
        tol: f64,
    },

    #[error("field has no entry for Bohr frequency omega = {0}")]
    MissingFieldEntry(f64),

    #[error("inverse temperature must be positive and finite, got {0}")]
    NonPositiveBeta(f64),

    #[error("occupation must be positive and finite, got {0}")]
    NonPositiveOccupation(f64),

    #[error("occupation is zero; emission/absorption quotient is infinite")]
    ZeroOccupation,

    #[error("generator is reducible: {0}")]
    ReducibleGenerator(String),

    #[error("three-level system is disconnected: {0}")]
    DisconnectedSystem(String),

    #[error("time step {dt:e} exceeds stability bound {max:e}")]
    StepTooLarge { dt: f64, max: f64 },

    #[error("invalid state vector: {0}")]
    InvalidState(String),

    #[error("invalid numerical parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
