//! Computational worlds: labeled, mutually non-interfering components of a state.
//!
//! Relative to a [`RegisterLayout`], a state `|ψ>` is written as
//!
//! ```text
//! |ψ> = Σ_α sqrt(w_α) |α>_A ⊗ |φ_α>_B
//! ```
//!
//! where `α` runs over computational-basis labels of register A. Each term
//! whose weight `w_α` exceeds a threshold is a [`World`]; any phase of the term
//! lives in the relative state `|φ_α>`, so weights are exactly the Born
//! probabilities of reading `α` on register A.
//!
//! Whether the decomposition is physically meaningful at a given moment is
//! judged by [`interference_matrix`]: a gate that keeps every label subspace
//! to itself leaves the worlds evolving independently, one that moves weight
//! between labels makes them interfere. [`track`] follows world counts along a
//! recorded run and reports where worlds split and merge.

use std::collections::BTreeMap;
use std::fmt;

use crate::algorithms::{Stage, StepTrace};
use crate::error::{Error, Result};
use crate::infometrics::shannon_entropy;
use crate::statecore::{Amplitude, GateSpec, RegisterLayout, StateVector};

/// Default squared-norm cutoff below which a labeled component is not a world.
pub const DEFAULT_WORLD_THRESHOLD: f64 = 1e-10;

/// Off-diagonal mass below which a gate counts as world-diagonal.
pub const DIAGONAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    /// Register-A value as a bitstring of length `n_a`.
    pub label: String,
    pub label_index: usize,
    /// Squared norm of the labeled component.
    pub weight: f64,
    /// Normalized register-B state, including the component's phase.
    pub relative_state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldDecomposition {
    pub layout: RegisterLayout,
    /// Sorted by label.
    pub worlds: Vec<World>,
    /// Total weight of labeled components at or below the threshold.
    pub residual: f64,
    pub threshold: f64,
}

impl WorldDecomposition {
    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.worlds.iter().map(|w| w.label.as_str()).collect()
    }

    pub fn world(&self, label: &str) -> Option<&World> {
        self.worlds.iter().find(|w| w.label == label)
    }

    pub fn total_weight(&self) -> f64 {
        self.worlds.iter().map(|w| w.weight).sum()
    }

    /// `|label> ⊗ |φ>` for world `i` on the full register, unit-norm.
    pub fn world_vector(&self, i: usize) -> StateVector {
        let w = &self.worlds[i];
        let dim_b = 1usize << self.layout.n_b();
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim_b << self.layout.n_a()];
        for (value, a) in w.relative_state.amplitudes().iter().enumerate() {
            amps[self.layout.join(w.label_index, value)] = *a;
        }
        StateVector::from_parts_unchecked(self.layout.num_qubits(), amps)
    }

    /// `Σ sqrt(w) |label> ⊗ |φ>`; unnormalized when the residual is non-zero.
    pub fn reconstruct(&self) -> Vec<Amplitude> {
        let dim = 1usize << self.layout.num_qubits();
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        for w in &self.worlds {
            let scale = w.weight.sqrt();
            for (value, a) in w.relative_state.amplitudes().iter().enumerate() {
                amps[self.layout.join(w.label_index, value)] += a * scale;
            }
        }
        amps
    }

    /// `|<reconstruction|ψ>|²`.
    pub fn reconstruction_fidelity(&self, state: &StateVector) -> Result<f64> {
        self.layout.check(state)?;
        let overlap: Amplitude = self
            .reconstruct()
            .iter()
            .zip(state.amplitudes())
            .map(|(r, s)| r.conj() * s)
            .sum();
        Ok(overlap.norm_sqr())
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "world threshold {threshold} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Split `state` into worlds labeled by the computational basis of register A.
pub fn decompose(state: &StateVector, layout: &RegisterLayout, threshold: f64) -> Result<WorldDecomposition> {
    check_threshold(threshold)?;
    layout.check(state)?;
    let dim_b = 1usize << layout.n_b();
    let amps = state.amplitudes();
    let mut worlds = Vec::new();
    let mut residual = 0.0;
    for (label, component) in amps.chunks_exact(dim_b).enumerate() {
        let weight: f64 = component.iter().map(|a| a.norm_sqr()).sum();
        if weight <= threshold {
            residual += weight;
            continue;
        }
        let scale = weight.sqrt();
        let relative = component.iter().map(|a| a / scale).collect();
        worlds.push(World {
            label: layout.label_string(label),
            label_index: label,
            weight,
            relative_state: StateVector::from_parts_unchecked(layout.n_b(), relative),
        });
    }
    Ok(WorldDecomposition {
        layout: *layout,
        worlds,
        residual,
        threshold,
    })
}

/// Decomposition of `|0>^n |0>` after a Hadamard on every register-A qubit.
pub fn hadamard1_decomposition(n: usize) -> Result<WorldDecomposition> {
    let layout = RegisterLayout::new(n, 1)?;
    let state = StateVector::zero_state(n + 1)?.apply(&GateSpec::hadamard_layer(layout.register_a()))?;
    decompose(&state, &layout, DEFAULT_WORLD_THRESHOLD)
}

/// Number of worlds present after Hadamard-1 on an `n`-qubit label register.
pub fn world_count_after_hadamard1(n: usize) -> Result<usize> {
    Ok(hadamard1_decomposition(n)?.world_count())
}

/// Where each world's weight goes under a prospective gate.
///
/// `mass[i][j]` is the squared norm that `U |world i>` places in the label
/// subspace of world `j`. `leakage[i]` is the mass landing on labels that are
/// not worlds of the decomposition, so each row plus its leakage sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceMatrix {
    pub labels: Vec<String>,
    pub mass: Vec<Vec<f64>>,
    pub leakage: Vec<f64>,
}

impl InterferenceMatrix {
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.mass.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(m);
                }
            }
        }
        self.leakage.iter().fold(worst, |acc, &l| acc.max(l))
    }

    /// No world sends more than `tol` of its weight to another label.
    pub fn is_world_diagonal(&self, tol: f64) -> bool {
        self.max_off_diagonal() < tol
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.mass
            .iter()
            .zip(&self.leakage)
            .map(|(row, l)| row.iter().sum::<f64>() + l)
            .collect()
    }
}

pub fn interference_matrix(decomp: &WorldDecomposition, next_gate: &GateSpec) -> Result<InterferenceMatrix> {
    if decomp.worlds.is_empty() {
        return Err(Error::InvalidParameter("decomposition has no worlds".into()));
    }
    next_gate.validate(decomp.layout.num_qubits())?;
    let dim_b = 1usize << decomp.layout.n_b();
    let column: BTreeMap<usize, usize> = decomp
        .worlds
        .iter()
        .enumerate()
        .map(|(j, w)| (w.label_index, j))
        .collect();
    let count = decomp.worlds.len();
    let mut mass = vec![vec![0.0; count]; count];
    let mut leakage = vec![0.0; count];
    for i in 0..count {
        let evolved = decomp.world_vector(i).apply(next_gate)?;
        for (label, component) in evolved.amplitudes().chunks_exact(dim_b).enumerate() {
            let m: f64 = component.iter().map(|a| a.norm_sqr()).sum();
            match column.get(&label) {
                Some(&j) => mass[i][j] += m,
                None => leakage[i] += m,
            }
        }
    }
    Ok(InterferenceMatrix {
        labels: decomp.worlds.iter().map(|w| w.label.clone()).collect(),
        mass,
        leakage,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Split,
    Merge,
    Stable,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Split => "split",
            EventKind::Merge => "merge",
            EventKind::Stable => "stable",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "split" => Some(EventKind::Split),
            "merge" => Some(EventKind::Merge),
            "stable" => Some(EventKind::Stable),
            _ => None,
        }
    }

    fn between(before: usize, after: usize) -> Self {
        match after.cmp(&before) {
            std::cmp::Ordering::Greater => EventKind::Split,
            std::cmp::Ordering::Less => EventKind::Merge,
            std::cmp::Ordering::Equal => EventKind::Stable,
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// World-count change between a step and its predecessor.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldEvent {
    /// Index of the later of the two steps.
    pub step_index: usize,
    pub kind: EventKind,
    pub count_before: usize,
    pub count_after: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepWorlds {
    pub step_index: usize,
    pub stage: Stage,
    pub description: String,
    pub world_count: usize,
    pub decomposition: WorldDecomposition,
}

/// A label that dropped below threshold and later came back. It is counted as
/// a merge followed by a split; whether it is "the same" world is left open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reappearance {
    pub label: String,
    pub vanished_at: usize,
    pub reappeared_at: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldTrace {
    pub per_step: Vec<StepWorlds>,
    pub events: Vec<WorldEvent>,
    pub reappearances: Vec<Reappearance>,
}

impl WorldTrace {
    pub fn world_counts(&self) -> Vec<usize> {
        self.per_step.iter().map(|s| s.world_count).collect()
    }

    pub fn count_events(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }
}

/// Decompose every step of `trace` and derive split/merge/stable events.
///
/// Worlds are identified across steps by label alone.
pub fn track(trace: &StepTrace, layout: &RegisterLayout, threshold: f64) -> Result<WorldTrace> {
    if trace.is_empty() {
        return Err(Error::InvalidParameter("empty step trace".into()));
    }
    let per_step = trace
        .steps()
        .iter()
        .map(|step| {
            let decomposition = decompose(&step.state, layout, threshold)?;
            Ok(StepWorlds {
                step_index: step.step_index,
                stage: step.stage,
                description: step.description.clone(),
                world_count: decomposition.world_count(),
                decomposition,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let events = per_step
        .windows(2)
        .map(|pair| WorldEvent {
            step_index: pair[1].step_index,
            kind: EventKind::between(pair[0].world_count, pair[1].world_count),
            count_before: pair[0].world_count,
            count_after: pair[1].world_count,
        })
        .collect();

    // label -> (step it was last seen, step it vanished)
    let mut history: BTreeMap<&str, Option<usize>> = BTreeMap::new();
    let mut reappearances = Vec::new();
    for (pos, step) in per_step.iter().enumerate() {
        for w in &step.decomposition.worlds {
            if let Some(Some(vanished_at)) = history.get(w.label.as_str()) {
                reappearances.push(Reappearance {
                    label: w.label.clone(),
                    vanished_at: *vanished_at,
                    reappeared_at: step.step_index,
                });
            }
            history.insert(w.label.as_str(), None);
        }
        for (label, vanished) in history.iter_mut() {
            if vanished.is_none() && step.decomposition.world(label).is_none() && pos > 0 {
                *vanished = Some(step.step_index);
            }
        }
    }

    Ok(WorldTrace {
        per_step,
        events,
        reappearances,
    })
}

/// Storage versus retrieval accounting for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationAudit {
    pub worlds_max: usize,
    /// Register-B qubits carried by each world.
    pub bits_per_world: usize,
    /// Bits needed to write the full register down classically, `2^N`.
    pub classical_bits_to_describe: u64,
    /// Shannon entropy of the register-A readout of the measured state.
    pub retrievable_bits: f64,
}

pub fn audit_information(trace: &StepTrace, layout: &RegisterLayout) -> Result<InformationAudit> {
    let tracked = track(trace, layout, DEFAULT_WORLD_THRESHOLD)?;
    let worlds_max = tracked.world_counts().into_iter().max().unwrap_or(0);
    let measured = trace.measured_state().expect("trace is non-empty");
    let dist = measured.outcome_distribution(&layout.register_a())?;
    Ok(InformationAudit {
        worlds_max,
        bits_per_world: layout.n_b(),
        classical_bits_to_describe: 1u64 << layout.num_qubits(),
        retrievable_bits: shannon_entropy(&dist)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::deutsch_run;
    use crate::oracle::BooleanFunction;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    fn minus() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]).unwrap()
    }

    #[test]
    fn single_world_for_basis_state() {
        let layout = RegisterLayout::new(1, 1).unwrap();
        let d = decompose(&StateVector::zero_state(2).unwrap(), &layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        assert_eq!(d.world_count(), 1);
        assert_eq!(d.worlds[0].label, "0");
        assert_eq!(d.worlds[0].weight, 1.0);
        assert_eq!(d.worlds[0].relative_state, StateVector::zero_state(1).unwrap());
        assert_eq!(d.residual, 0.0);
    }

    #[test]
    fn two_worlds_after_first_hadamards() {
        let layout = RegisterLayout::new(1, 1).unwrap();
        let psi = StateVector::basis_state(2, 1)
            .unwrap()
            .apply(&GateSpec::hadamard_layer([0, 1]))
            .unwrap();
        let d = decompose(&psi, &layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        assert_eq!(d.labels(), ["0", "1"]);
        for w in &d.worlds {
            assert!((w.weight - 0.5).abs() < 1e-12);
            assert!(w.relative_state.approx_eq(&minus(), 1e-12));
        }
    }

    #[test]
    fn kickback_phase_lives_in_relative_state() {
        let r = deutsch_run(&"01".parse::<BooleanFunction>().unwrap(), 0).unwrap();
        let state = &r.trace.stage(Stage::Manipulation).unwrap().state;
        let d = decompose(state, &r.layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        assert!(d.world("0").unwrap().relative_state.approx_eq(&minus(), 1e-12));
        let flipped = StateVector::from_amplitudes(vec![c(-FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        assert!(d.world("1").unwrap().relative_state.approx_eq(&flipped, 1e-12));
    }

    #[test]
    fn hadamard1_counts() {
        assert_eq!(world_count_after_hadamard1(1).unwrap(), 2);
        let d = hadamard1_decomposition(3).unwrap();
        assert_eq!(d.world_count(), 8);
        for w in &d.worlds {
            assert!((w.weight - 0.125).abs() < 1e-12);
        }
        assert!(world_count_after_hadamard1(0).is_err());
    }

    #[test]
    fn threshold_must_be_in_unit_interval() {
        let layout = RegisterLayout::new(1, 1).unwrap();
        let s = StateVector::zero_state(2).unwrap();
        assert!(decompose(&s, &layout, 0.0).is_err());
        assert!(decompose(&s, &layout, 1.0).is_err());
        assert!(decompose(&s, &RegisterLayout::new(2, 1).unwrap(), 0.1).is_err());
    }

    #[test]
    fn empty_register_b() {
        let layout = RegisterLayout::new(1, 0).unwrap();
        let plus = StateVector::zero_state(1)
            .unwrap()
            .apply(&GateSpec::hadamard(0))
            .unwrap();
        let d = decompose(&plus, &layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        assert_eq!(d.world_count(), 2);
        assert_eq!(d.worlds[0].relative_state.num_qubits(), 0);
        assert!((d.reconstruction_fidelity(&plus).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn final_hadamard_mixes_worlds() {
        let r = deutsch_run(&"00".parse::<BooleanFunction>().unwrap(), 0).unwrap();
        let state = &r.trace.stage(Stage::Manipulation).unwrap().state;
        let d = decompose(state, &r.layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        let m = interference_matrix(&d, &GateSpec::hadamard(0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.mass[i][j] - 0.5).abs() < 1e-12);
            }
        }
        assert!(!m.is_world_diagonal(DIAGONAL_TOLERANCE));
        let id_b = interference_matrix(&d, &GateSpec::hadamard(1)).unwrap();
        assert!(id_b.is_world_diagonal(DIAGONAL_TOLERANCE));
    }

    #[test]
    fn leakage_to_non_world_labels() {
        let layout = RegisterLayout::new(1, 1).unwrap();
        let d = decompose(&StateVector::zero_state(2).unwrap(), &layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        let m = interference_matrix(&d, &GateSpec::hadamard(0)).unwrap();
        assert!((m.mass[0][0] - 0.5).abs() < 1e-12);
        assert!((m.leakage[0] - 0.5).abs() < 1e-12);
        assert!((m.row_sums()[0] - 1.0).abs() < 1e-12);
        assert!(!m.is_world_diagonal(DIAGONAL_TOLERANCE));
    }

    #[test]
    fn track_identity_and_single_hadamard() {
        let layout = RegisterLayout::new(1, 0).unwrap();
        let mut trace = StepTrace::new();
        let zero = StateVector::zero_state(1).unwrap();
        trace.push(Stage::Init, "start", zero.clone());
        trace.push(Stage::Hadamard1, "H", zero.apply(&GateSpec::hadamard(0)).unwrap());
        let t = track(&trace, &layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        assert_eq!(t.world_counts(), [1, 2]);
        assert_eq!(t.events[0].kind, EventKind::Split);

        let mut idle = StepTrace::new();
        for _ in 0..4 {
            idle.push(
                Stage::Manipulation,
                "identity",
                zero.apply(&GateSpec::identity()).unwrap(),
            );
        }
        let t = track(&idle, &layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        assert!(t.events.iter().all(|e| e.kind == EventKind::Stable));
        assert!(track(&StepTrace::new(), &layout, DEFAULT_WORLD_THRESHOLD).is_err());
    }

    #[test]
    fn reappearing_label_is_flagged() {
        let layout = RegisterLayout::new(1, 0).unwrap();
        let zero = StateVector::zero_state(1).unwrap();
        let plus = zero.apply(&GateSpec::hadamard(0)).unwrap();
        let mut trace = StepTrace::new();
        trace.push(Stage::Init, "|+>", plus.clone());
        trace.push(Stage::Hadamard2, "|0>", zero);
        trace.push(Stage::Hadamard1, "|+>", plus);
        let t = track(&trace, &layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        assert_eq!(t.world_counts(), [2, 1, 2]);
        assert_eq!(
            t.reappearances,
            vec![Reappearance {
                label: "1".into(),
                vanished_at: 1,
                reappeared_at: 2
            }]
        );
    }

    #[test]
    fn deutsch_audit() {
        let r = deutsch_run(&"10".parse::<BooleanFunction>().unwrap(), 0).unwrap();
        let a = audit_information(&r.trace, &r.layout).unwrap();
        assert_eq!(a.worlds_max, 2);
        assert_eq!(a.bits_per_world, 1);
        assert_eq!(a.classical_bits_to_describe, 4);
        assert!(a.retrievable_bits <= 1.0);
    }
}
