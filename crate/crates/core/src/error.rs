use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {n_qubits} outside 1..={max}")]
    InvalidQubitCount { n_qubits: usize, max: usize },

    #[error("operands act on {left} and {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("Pauli string {0} has an imaginary phase")]
    ImaginaryPhase(String),

    #[error("cannot parse Pauli string: {0}")]
    ParsePauli(String),

    #[error("mask {mask} out of range for a {n_qubits}-qubit group")]
    MaskOutOfRange { mask: u64, n_qubits: usize },

    #[error("{n_qubits} qubits exceeds the limit of {max} for this operation")]
    TooManyQubits { n_qubits: usize, max: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("graph spec line {line}: {message}")]
    GraphSpec { line: usize, message: String },

    #[error(
        "noise lambda = {lambda} is at or beyond the limit {limit} = 2^n / (2(2^n - 1)); \
         the expected deviation from the separable bound is not positive"
    )]
    NoiseBeyondLimit { lambda: f64, limit: f64 },

    #[error("fidelity estimation requires uniform sampling weights")]
    NonUniformWeights,

    #[error("{0}")]
    InvalidArgument(String),
}
