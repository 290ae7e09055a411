//! Dense state-vector and density-matrix kernel.
//!
//! Conventions used throughout the crate:
//!
//! * qubit 0 is the most significant bit of a basis index, so `|01>` on two
//!   qubits is index 1;
//! * register A (world labels) occupies the leading qubits, register B the rest;
//! * every [`StateVector`] is unit-norm, and comparisons against hand-written
//!   states are made up to global phase via [`StateVector::fidelity`].
//!
//! Operations have value semantics: they return new states and never mutate
//! their inputs, except for the explicit `*_in_place` methods.

mod density;
mod gate;
mod measure;
mod state;

pub use density::{DensityMatrix, DENSITY_TOLERANCE, NEGATIVE_EIGENVALUE_TOLERANCE};
pub use gate::{
    apply_gate, ry_matrix, unitarity_deviation, GateSpec, Matrix2, FULL_MATRIX_MAX_QUBITS, HADAMARD, IDENTITY, PAULI_X,
    PAULI_Z, UNITARY_TOLERANCE,
};
pub use measure::{measure_qubit, measure_qubits, seeded_rng, JointMeasurement, MeasurementRecord, SimRng};
pub use state::{Amplitude, RegisterLayout, StateVector, MAX_QUBITS, NORM_TOLERANCE};

pub(crate) use state::check_cap;

use crate::error::Result;

pub fn zero_state(num_qubits: usize) -> Result<StateVector> {
    StateVector::zero_state(num_qubits)
}

pub fn basis_state(num_qubits: usize, index: usize) -> Result<StateVector> {
    StateVector::basis_state(num_qubits, index)
}

pub fn outcome_distribution(state: &StateVector, qubits: &[usize]) -> Result<Vec<f64>> {
    state.outcome_distribution(qubits)
}

pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Amplitude> {
    a.inner_product(b)
}

pub fn density_from_state(state: &StateVector) -> DensityMatrix {
    DensityMatrix::from_state(state)
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}
