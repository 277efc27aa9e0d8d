//! Dense complex linear algebra, parametrized 2-qubit unitaries, angle
//! encoding, measurement readout and unitary-channel distances.

mod circuit;
mod distance;
mod matrix;
mod pauli;

pub use circuit::{
    encode, measure_vector, run_circuit, run_gates, CircuitSpec, Encoding, GateSite, Observable,
    QuantumState, MAX_QUBITS, PSD_TOL, STATE_TOL, UNITARY_TOL,
};
pub use distance::{diamond_distance_unitary, telescope_bound};
pub use matrix::{spectral_norm, ComplexMatrix};
pub use pauli::{
    build_unitary, generator_index, generator_labels, generators, pauli_product, Pauli,
    TwoQubitGate, GENERATOR_COUNT,
};
