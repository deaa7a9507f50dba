use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the register, fuzzy-set and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("requested {requested} qubits but the register cap is {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("a register needs at least one qubit")]
    EmptyRegister,

    #[error("qubit index {index} is out of range 1..={n_qubits}")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit {0} is used more than once")]
    QubitCollision(usize),

    #[error("gate is not unitary (max deviation {0:e})")]
    NonUnitary(f64),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("membership {value} of element {element} is outside [0, 1]")]
    InvalidMembership { element: usize, value: f64 },

    #[error("element index {index} is out of range 1..={universe_size}")]
    ElementOutOfRange { index: usize, universe_size: usize },

    #[error("universe of size {size} exceeds the enumeration limit {limit}")]
    UniverseTooLarge { size: usize, limit: usize },

    #[error("state norm {0:e} is too small to normalize")]
    DegenerateState(f64),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("a register of {0} qubits cannot be split into two equal halves")]
    OddRegister(usize),

    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),

    #[error("amplitude array of length {0} is not a positive power of two")]
    BadAmplitudeLength(usize),

    #[error("amplitude {0} is not finite")]
    NonFinite(usize),

    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("shots must be at least 1")]
    ZeroShots,

    #[error("a superposition needs at least one term")]
    EmptySuperposition,
}
