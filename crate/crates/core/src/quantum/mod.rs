//! Exact numerical quantum mechanics: states, unitaries, channels,
//! measurement, and the metrics used by every other module.

mod channel;
pub mod gates;
mod metrics;
mod pauli;
mod state;

pub use channel::KrausChannel;
pub use metrics::{fidelity, fidelity_to_pure, spectral_norm, trace_distance};
pub use pauli::{PauliLetter, PauliString};
pub use state::{
    apply_matrix_to_vec, embed_unitary, pauli_ket_action, DensityMatrix, MeasureBasis,
    StateVector,
};

use thiserror::Error;

/// Errors from the numerical core.
#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("qubit index {index} out of range for {num_qubits}-qubit object")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("repeated target qubit {0}")]
    RepeatedTarget(usize),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("Kraus set is not trace preserving (deviation {0:.3e})")]
    IncompleteKraus(f64),
    #[error("state failed invariant check: {0}")]
    InvalidState(String),
    #[error("operation would exceed the {cap}-qubit resource cap (requested {requested})")]
    ResourceLimit { requested: usize, cap: usize },
    #[error("keep set must be a nonempty subset of qubits")]
    EmptyKeepSet,
}

pub(crate) type Result<T> = std::result::Result<T, QuantumError>;

/// Bit position of `qubit` inside an index over `n` qubits (qubit 0 = MSB).
#[inline]
pub(crate) fn bit_shift(qubit: usize, n: usize) -> usize {
    n - 1 - qubit
}

/// Value of `qubit`'s bit in basis-state `index`.
#[inline]
pub fn bit_of(index: usize, qubit: usize, n: usize) -> u8 {
    ((index >> bit_shift(qubit, n)) & 1) as u8
}
