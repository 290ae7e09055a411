//! Environment-induced decoherence and the branch/world distinction.
//!
//! Two models of the same effect. [`dephase`] is a phenomenological channel
//! that shrinks every computational-basis coherence by `e^(-γ)` per step.
//! [`entangle_environment`] is mechanistic: environment qubits start in `|0>`
//! and each step rotates environment qubit `k` by `RY(θ_k)` conditioned on
//! system qubit `k mod n_sys`. Tracing out the environment then multiplies the
//! coherence between system basis states by the overlap of the environment
//! records they left, so for one system qubit after `t` steps
//!
//! ```text
//! |ρ_01(t)| = ½ ∏_k |cos(t θ_k / 2)|
//! ```
//!
//! A finite environment eventually revives coherence. [`branch_stability`]
//! separates components that stay decohered over a trailing window
//! ([`BranchClass::Branch`]) from ones that are only momentarily so
//! ([`BranchClass::WorldPointInTime`]).

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::statecore::{check_cap, seeded_rng, Amplitude, DensityMatrix, GateSpec, StateVector};

/// Off-diagonal magnitude below which a sample counts as decohered.
pub const DEFAULT_BRANCH_THRESHOLD: f64 = 1e-6;

/// Default trailing window: the last quarter of the series, at least one sample.
pub fn default_window(len: usize) -> usize {
    len.div_ceil(4).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentModel {
    pub env_qubits: usize,
    pub coupling_angles: Vec<f64>,
    pub rng_seed: u64,
}

impl EnvironmentModel {
    pub fn new(coupling_angles: Vec<f64>, rng_seed: u64) -> Result<Self> {
        if let Some(bad) = coupling_angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling angle {bad} is not finite")));
        }
        Ok(EnvironmentModel {
            env_qubits: coupling_angles.len(),
            coupling_angles,
            rng_seed,
        })
    }

    pub fn none() -> Self {
        EnvironmentModel {
            env_qubits: 0,
            coupling_angles: Vec::new(),
            rng_seed: 0,
        }
    }

    /// Angles `π, π/2, π/4, ...`.
    ///
    /// With `k` qubits every step count `t` in `1..2^k` has some factor
    /// `cos(t π / 2^(j+1))` equal to zero, so a single system qubit stays fully
    /// decohered until the environment recurs at `t = 2^k`.
    pub fn binary_ladder(env_qubits: usize) -> Self {
        EnvironmentModel {
            env_qubits,
            coupling_angles: (0..env_qubits).map(|k| PI / (1u64 << k) as f64).collect(),
            rng_seed: 0,
        }
    }

    /// Angles drawn uniformly from `[0, π)`.
    pub fn random(env_qubits: usize, rng_seed: u64) -> Self {
        let mut rng = seeded_rng(rng_seed);
        EnvironmentModel {
            env_qubits,
            coupling_angles: (0..env_qubits).map(|_| rng.random::<f64>() * PI).collect(),
            rng_seed,
        }
    }

    /// `e^(-γ)` that makes one dephasing step match one coupling step.
    pub fn one_step_decay(&self) -> f64 {
        self.coupling_angles.iter().map(|t| (t / 2.0).cos().abs()).product()
    }

    /// Closed-form coherence of an equal superposition of one system qubit after `t` steps.
    pub fn predicted_offdiag(&self, t: usize) -> f64 {
        0.5 * self
            .coupling_angles
            .iter()
            .map(|theta| (t as f64 * theta / 2.0).cos().abs())
            .product::<f64>()
    }

    fn validate(&self) -> Result<()> {
        if self.env_qubits != self.coupling_angles.len() {
            return Err(Error::InvalidParameter(format!(
                "{} environment qubits but {} coupling angles",
                self.env_qubits,
                self.coupling_angles.len()
            )));
        }
        if let Some(bad) = self.coupling_angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling angle {bad} is not finite")));
        }
        Ok(())
    }
}

/// `(|00> + |11>)/√2`; qubit 0 is the microsystem, qubit 1 the cat.
pub fn cat_state() -> StateVector {
    let zero = Amplitude::new(0.0, 0.0);
    let h = Amplitude::new(FRAC_1_SQRT_2, 0.0);
    StateVector::from_amplitudes(vec![h, zero, zero, h]).expect("cat state is normalized")
}

/// Apply the dephasing channel `steps` times. The output has `steps + 1`
/// entries, the first being `rho` itself.
pub fn dephase(rho: &DensityMatrix, gamma: f64, steps: usize) -> Result<Vec<DensityMatrix>> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dephasing rate {gamma} must be finite and >= 0"
        )));
    }
    rho.validate()?;
    let factor = (-gamma).exp();
    let dim = rho.dim();
    let mut out = Vec::with_capacity(steps + 1);
    let mut current = rho.clone();
    out.push(current.clone());
    for _ in 0..steps {
        let entries = current.entries_mut();
        for r in 0..dim {
            for c in 0..dim {
                if r != c {
                    entries[r * dim + c] *= factor;
                }
            }
        }
        out.push(current.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentStep {
    /// System qubits first, then the environment.
    pub joint: StateVector,
    /// Environment traced out.
    pub reduced: DensityMatrix,
}

/// Couple `system` to a fresh environment and record `steps + 1` snapshots,
/// starting before any interaction.
pub fn entangle_environment(
    system: &StateVector,
    env: &EnvironmentModel,
    steps: usize,
) -> Result<Vec<EnvironmentStep>> {
    env.validate()?;
    let n_sys = system.num_qubits();
    if n_sys == 0 {
        return Err(Error::InvalidParameter("system must have at least one qubit".into()));
    }
    check_cap(n_sys + env.env_qubits)?;
    let mut joint = if env.env_qubits == 0 {
        system.clone()
    } else {
        system.tensor(&StateVector::zero_state(env.env_qubits)?)?
    };
    let keep: Vec<usize> = (0..n_sys).collect();
    let gates: Vec<GateSpec> = env
        .coupling_angles
        .iter()
        .enumerate()
        .map(|(k, &theta)| GateSpec::controlled_ry(k % n_sys, n_sys + k, theta))
        .collect();

    let mut out = Vec::with_capacity(steps + 1);
    out.push(EnvironmentStep {
        reduced: joint.reduced_density(&keep)?,
        joint: joint.clone(),
    });
    for _ in 0..steps {
        for g in &gates {
            joint.apply_in_place(g)?;
        }
        out.push(EnvironmentStep {
            reduced: joint.reduced_density(&keep)?,
            joint: joint.clone(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceSample {
    pub t: usize,
    pub offdiag_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoherenceSeries {
    pub samples: Vec<CoherenceSample>,
}

impl CoherenceSeries {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        CoherenceSeries {
            samples: values
                .into_iter()
                .enumerate()
                .map(|(t, offdiag_norm)| CoherenceSample { t, offdiag_norm })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.offdiag_norm).collect()
    }
}

/// Largest off-diagonal magnitude of each matrix, indexed by position.
pub fn coherence_series<'a>(rhos: impl IntoIterator<Item = &'a DensityMatrix>) -> CoherenceSeries {
    CoherenceSeries::from_values(rhos.into_iter().map(DensityMatrix::max_off_diagonal))
}

pub fn environment_coherence(steps: &[EnvironmentStep]) -> CoherenceSeries {
    coherence_series(steps.iter().map(|s| &s.reduced))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchClass {
    Branch,
    WorldPointInTime,
    Coherent,
}

impl BranchClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            BranchClass::Branch => "branch",
            BranchClass::WorldPointInTime => "world_point_in_time",
            BranchClass::Coherent => "coherent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "branch" => Some(BranchClass::Branch),
            "world_point_in_time" => Some(BranchClass::WorldPointInTime),
            "coherent" => Some(BranchClass::Coherent),
            _ => None,
        }
    }
}

impl fmt::Display for BranchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchReport {
    pub classification: BranchClass,
    pub series: CoherenceSeries,
    pub threshold: f64,
    pub window: usize,
    /// Threshold and window were the built-in defaults rather than caller choices.
    pub defaults_used: bool,
}

pub fn branch_stability(series: &CoherenceSeries, threshold: f64, window: usize) -> Result<BranchReport> {
    if series.is_empty() {
        return Err(Error::InvalidParameter("coherence series is empty".into()));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "threshold {threshold} must be positive"
        )));
    }
    if window == 0 || window > series.len() {
        return Err(Error::InvalidParameter(format!(
            "window {window} must lie in 1..={}",
            series.len()
        )));
    }
    let below = |s: &CoherenceSample| s.offdiag_norm < threshold;
    let tail = &series.samples[series.len() - window..];
    let classification = if tail.iter().all(below) {
        BranchClass::Branch
    } else if series.samples.iter().any(below) {
        BranchClass::WorldPointInTime
    } else {
        BranchClass::Coherent
    };
    Ok(BranchReport {
        classification,
        series: series.clone(),
        threshold,
        window,
        defaults_used: false,
    })
}

/// [`branch_stability`] with [`DEFAULT_BRANCH_THRESHOLD`] and [`default_window`].
pub fn branch_stability_default(series: &CoherenceSeries) -> Result<BranchReport> {
    let mut report = branch_stability(series, DEFAULT_BRANCH_THRESHOLD, default_window(series.len()))?;
    report.defaults_used = true;
    Ok(report)
}
