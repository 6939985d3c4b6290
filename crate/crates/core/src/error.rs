use thiserror::Error;

pub type Result<T> = std::result::Result<T, AgpError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgpError {
    #[error("register of {requested} qubits exceeds the capacity of {max}")]
    Capacity { requested: usize, max: usize },

    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("gate `{0}` has no OpenQASM 2.0 equivalent")]
    UnsupportedGate(String),

    #[error("geminal matrix is missing entry ({row}, {col})")]
    Incomplete { row: usize, col: usize },

    #[error("particle-number sector N={0} retained no weight")]
    EmptySector(usize),
}

impl AgpError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        AgpError::Validation(msg.into())
    }
}
