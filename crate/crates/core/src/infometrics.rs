//! Shannon and von Neumann entropies, the preparation/measurement entropy
//! bounds, and the one-bit-per-qubit retrieval limit.
//!
//! All entropies are in bits.

use rand::Rng;

use crate::algorithms::{classical_single_query, deutsch_run};
use crate::error::{Error, Result};
use crate::oracle::BooleanFunction;
use crate::sampling::{random_product_unitary, random_state};
use crate::statecore::{seeded_rng, DensityMatrix, GateSpec, StateVector, NEGATIVE_EIGENVALUE_TOLERANCE};

/// Slack allowed when comparing a Shannon entropy against a von Neumann entropy.
pub const BOUND_SLACK: f64 = 1e-9;

/// Normalization tolerance for probability vectors.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Largest register accepted by [`von_neumann_entropy`].
pub const ENTROPY_QUBIT_CAP: usize = 8;

/// Largest register accepted by [`storage_retrieval_bound`].
pub const STORAGE_BATTERY_QUBIT_CAP: usize = 6;

/// Seed of the random part of the storage/retrieval battery.
pub const STORAGE_BATTERY_SEED: u64 = 0x5eed_0b17;

/// Number of random states in the storage/retrieval battery.
pub const STORAGE_BATTERY_RANDOM_STATES: usize = 100;

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// `-Σ p log₂ p`, with `0 log 0 = 0`.
pub fn shannon_entropy(dist: &[f64]) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if let Some(p) = dist.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "entry {p} is negative or not finite"
        )));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(dist.iter().map(|&p| plogp(p)).sum())
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    plogp(p) + plogp(1.0 - p)
}

/// `-Σ λ log₂ λ` over the eigenvalues of `rho`.
///
/// Eigenvalues in `[-1e-10, 0)` are clipped to zero; anything lower is rejected.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() > ENTROPY_QUBIT_CAP {
        return Err(Error::QubitCap {
            requested: rho.num_qubits(),
            cap: ENTROPY_QUBIT_CAP,
        });
    }
    let mut s = 0.0;
    for lambda in rho.eigenvalues()? {
        if lambda < -NEGATIVE_EIGENVALUE_TOLERANCE {
            return Err(Error::NegativeEigenvalue(lambda));
        }
        s += plogp(lambda.max(0.0));
    }
    Ok(s.max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember {
    pub probability: f64,
    pub state: StateVector,
}

/// A preparation procedure: state `i` is produced with probability `p_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<EnsembleMember>,
}

impl Ensemble {
    pub fn new(members: Vec<EnsembleMember>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidDistribution("empty ensemble".into()))?;
        let num_qubits = first.state.num_qubits();
        for m in &members {
            if m.state.num_qubits() != num_qubits {
                return Err(Error::DimensionMismatch {
                    expected: num_qubits,
                    actual: m.state.num_qubits(),
                });
            }
            if !m.probability.is_finite() || m.probability < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "probability {} is negative or not finite",
                    m.probability
                )));
            }
        }
        let total: f64 = members.iter().map(|m| m.probability).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, StateVector)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(probability, state)| EnsembleMember { probability, state })
                .collect(),
        )
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.probability).collect()
    }

    /// `Σ p_i |ψ_i><ψ_i|`.
    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::mixture(self.members.iter().map(|m| (m.probability, &m.state)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub shannon_bits: f64,
    pub von_neumann_bits: f64,
    /// `shannon_bits >= von_neumann_bits - 1e-9`.
    pub bound_satisfied: bool,
}

impl EntropyReport {
    fn new(shannon_bits: f64, von_neumann_bits: f64) -> Self {
        Self {
            shannon_bits,
            von_neumann_bits,
            bound_satisfied: shannon_bits >= von_neumann_bits - BOUND_SLACK,
        }
    }

    pub fn slack(&self) -> f64 {
        self.shannon_bits - self.von_neumann_bits
    }
}

/// Shannon entropy of the preparation probabilities against `S(Σ p_i ρ_i)`.
pub fn preparation_entropy(ensemble: &Ensemble) -> Result<EntropyReport> {
    let h = shannon_entropy(&ensemble.probabilities())?;
    let s = von_neumann_entropy(&ensemble.density()?)?;
    Ok(EntropyReport::new(h, s))
}

/// Shannon entropy of computational-basis outcomes after rotating by `basis`,
/// against the von Neumann entropy of the (unrotated) state.
pub fn measurement_entropy(state: &StateVector, basis: &GateSpec) -> Result<EntropyReport> {
    let rotated = state.apply(basis)?;
    let all: Vec<usize> = (0..state.num_qubits()).collect();
    let h = shannon_entropy(&rotated.outcome_distribution(&all)?)?;
    let s = von_neumann_entropy(&DensityMatrix::from_state(state))?;
    Ok(EntropyReport::new(h, s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StorageReport {
    pub n_qubits: usize,
    /// Largest measurement entropy found over the battery.
    pub max_retrievable_bits: f64,
    pub battery_size: usize,
    /// No battery member exceeded `n_qubits` bits.
    pub bound_holds: bool,
}

/// Measure a battery of states and bases and report the most information any
/// single measurement extracted.
///
/// The battery holds every computational basis state, the uniform superposition
/// (both read in the computational basis), and seeded random pure states read in
/// random product bases.
pub fn storage_retrieval_bound(n_qubits: usize) -> Result<StorageReport> {
    if n_qubits == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if n_qubits > STORAGE_BATTERY_QUBIT_CAP {
        return Err(Error::QubitCap {
            requested: n_qubits,
            cap: STORAGE_BATTERY_QUBIT_CAP,
        });
    }
    let all: Vec<usize> = (0..n_qubits).collect();
    let computational = GateSpec::identity();
    let mut reports = Vec::new();

    for index in 0..1usize << n_qubits {
        let s = StateVector::basis_state(n_qubits, index)?;
        reports.push(measurement_entropy(&s, &computational)?);
    }
    let uniform = StateVector::zero_state(n_qubits)?.apply(&GateSpec::hadamard_layer(all.iter().copied()))?;
    reports.push(measurement_entropy(&uniform, &computational)?);

    let mut rng = seeded_rng(STORAGE_BATTERY_SEED);
    for _ in 0..STORAGE_BATTERY_RANDOM_STATES {
        let s = random_state(n_qubits, &mut rng)?;
        let basis = GateSpec::unitary(all.clone(), random_product_unitary(n_qubits, &mut rng));
        reports.push(measurement_entropy(&s, &basis)?);
    }

    let max = reports.iter().map(|r| r.shannon_bits).fold(0.0, f64::max);
    Ok(StorageReport {
        n_qubits,
        max_retrievable_bits: max,
        battery_size: reports.len(),
        bound_holds: reports.iter().all(|r| r.shannon_bits <= n_qubits as f64 + BOUND_SLACK),
    })
}

/// Entropy of the algorithm's one-bit answer versus a one-query classical run,
/// both taken over a uniformly random one-bit function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputParity {
    pub quantum_bits: f64,
    pub classical_bits: f64,
}

/// Compare output information of the Deutsch algorithm and of a classical
/// single query at input `x`, averaging over all four one-bit functions.
pub fn output_parity(x: usize) -> Result<OutputParity> {
    let functions: Vec<BooleanFunction> = ["00", "01", "10", "11"]
        .iter()
        .map(|t| t.parse())
        .collect::<Result<_>>()?;
    let weight = 1.0 / functions.len() as f64;
    let mut quantum = [0.0; 2];
    let mut classical = [0.0; 2];
    for f in &functions {
        let run = deutsch_run(f, 0)?;
        let measured = run.trace.measured_state().expect("deutsch run records states");
        let dist = measured.outcome_distribution(&[0])?;
        quantum[0] += weight * dist[0];
        quantum[1] += weight * dist[1];
        let q = classical_single_query(f, x)?;
        classical[q.value as usize] += weight;
    }
    Ok(OutputParity {
        quantum_bits: shannon_entropy(&quantum)?,
        classical_bits: shannon_entropy(&classical)?,
    })
}

/// Random ensemble of `members` pure states on `num_qubits` qubits with random weights.
pub fn random_ensemble<R: Rng + ?Sized>(num_qubits: usize, members: usize, rng: &mut R) -> Result<Ensemble> {
    let raw: Vec<f64> = (0..members).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let mut pairs = Vec::with_capacity(members);
    let mut acc = 0.0;
    for (i, w) in raw.iter().enumerate() {
        // last weight absorbs round-off so the sum is exactly representable as 1
        let p = if i + 1 == members { 1.0 - acc } else { w / total };
        acc += p;
        pairs.push((p, random_state(num_qubits, rng)?));
    }
    Ensemble::from_pairs(pairs)
}
