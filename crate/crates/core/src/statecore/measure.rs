use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

use super::state::{check_qubits, Amplitude, StateVector};

/// The seeded generator used for every sampling operation.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome of a single-qubit projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: u8,
    /// Born probability of `outcome` in the pre-measurement state.
    pub probability: f64,
    pub post_state: StateVector,
}

/// Outcome of measuring several qubits jointly.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMeasurement {
    pub qubits: Vec<usize>,
    /// Outcome index, `qubits[0]` most significant.
    pub outcome: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Measure one qubit in the computational basis.
pub fn measure_qubit(state: &StateVector, qubit: usize, rng_seed: u64) -> Result<MeasurementRecord> {
    let joint = measure_qubits(state, &[qubit], rng_seed)?;
    Ok(MeasurementRecord {
        qubit,
        outcome: joint.outcome as u8,
        probability: joint.probability,
        post_state: joint.post_state,
    })
}

/// Measure `qubits` jointly, sampling from the exact Born distribution.
pub fn measure_qubits(state: &StateVector, qubits: &[usize], rng_seed: u64) -> Result<JointMeasurement> {
    let dist = state.outcome_distribution(qubits)?;
    let mut rng = seeded_rng(rng_seed);
    let outcome = sample_index(&dist, rng.random::<f64>());
    project(state, qubits, outcome, dist[outcome])
}

/// Inverse-CDF sampling; never returns a zero-probability outcome.
fn sample_index(dist: &[f64], r: f64) -> usize {
    let total: f64 = dist.iter().sum();
    let target = r * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last_nonzero = i;
        acc += p;
        if target < acc {
            return i;
        }
    }
    last_nonzero
}

/// Project onto `outcome` on `qubits` and renormalize.
pub(crate) fn project(
    state: &StateVector,
    qubits: &[usize],
    outcome: usize,
    probability: f64,
) -> Result<JointMeasurement> {
    check_qubits(state.num_qubits(), qubits)?;
    let scale = probability.sqrt();
    let amps = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if state.extract_bits(i, qubits) == outcome {
                a / scale
            } else {
                Amplitude::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(JointMeasurement {
        qubits: qubits.to_vec(),
        outcome,
        probability,
        post_state: StateVector::from_parts_unchecked(state.num_qubits(), amps),
    })
}
