//! The Deutsch algorithm, its n-bit Deutsch–Jozsa generalization as a
//! three-stage pipeline (Hadamard-1, manipulation, Hadamard-2), and the
//! classical single-query baseline.
//!
//! Every run records a [`StepTrace`] with one state per stage so the world
//! structure can be inspected afterwards.

use std::cell::Cell;
use std::fmt;

use crate::error::{Error, Result};
use crate::oracle::{BooleanFunction, FunctionClass};
use crate::statecore::{measure_qubits, GateSpec, RegisterLayout, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Init,
    Hadamard1,
    Manipulation,
    Hadamard2,
    Measurement,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Init => "init",
            Stage::Hadamard1 => "hadamard1",
            Stage::Manipulation => "manipulation",
            Stage::Hadamard2 => "hadamard2",
            Stage::Measurement => "measurement",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        Some(match s {
            "init" => Stage::Init,
            "hadamard1" => Stage::Hadamard1,
            "manipulation" => Stage::Manipulation,
            "hadamard2" => Stage::Hadamard2,
            "measurement" => Stage::Measurement,
            _ => return None,
        })
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub step_index: usize,
    pub description: String,
    pub stage: Stage,
    pub state: StateVector,
}

/// Ordered record of the states a run passed through.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepTrace {
    steps: Vec<Step>,
}

impl StepTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a step; its index is one past the previous one.
    pub fn push(&mut self, stage: Stage, description: impl Into<String>, state: StateVector) {
        let step_index = self.steps.last().map_or(0, |s| s.step_index + 1);
        self.steps.push(Step {
            step_index,
            description: description.into(),
            stage,
            state,
        });
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> Option<&Step> {
        self.steps.last()
    }

    /// First step recorded for `stage`.
    pub fn stage(&self, stage: Stage) -> Option<&Step> {
        self.steps.iter().find(|s| s.stage == stage)
    }

    /// The state handed to the measurement, or the final state if nothing was measured.
    pub fn measured_state(&self) -> Option<&StateVector> {
        let pos = self.steps.iter().position(|s| s.stage == Stage::Measurement);
        match pos {
            Some(0) | None => self.steps.last().map(|s| &s.state),
            Some(p) => Some(&self.steps[p - 1].state),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Constant,
    Balanced,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Constant => "constant",
            Verdict::Balanced => "balanced",
        }
    }

    pub fn matches(&self, class: FunctionClass) -> bool {
        matches!(
            (self, class),
            (Verdict::Constant, FunctionClass::Constant) | (Verdict::Balanced, FunctionClass::Balanced)
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeutschResult {
    /// 0 means "constant", 1 means "balanced".
    pub outcome_bit: u8,
    /// Exact probability of `outcome_bit` in the state that was measured.
    pub outcome_probability: f64,
    pub verdict: Verdict,
    /// Register-A value drawn with the run's seed.
    pub sampled_outcome: usize,
    pub layout: RegisterLayout,
    pub trace: StepTrace,
}

fn verdict_for(bit: u8) -> Verdict {
    if bit == 0 {
        Verdict::Constant
    } else {
        Verdict::Balanced
    }
}

/// Two-qubit Deutsch algorithm: `|01> -> H⊗H -> U_f -> H_a -> measure a`.
pub fn deutsch_run(f: &BooleanFunction, rng_seed: u64) -> Result<DeutschResult> {
    if f.n() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            actual: f.n(),
        });
    }
    let layout = RegisterLayout::new(1, 1)?;
    let mut trace = StepTrace::new();

    let mut state = StateVector::basis_state(2, 0b01)?;
    trace.push(Stage::Init, "prepare |0>_a |1>_b", state.clone());

    state.apply_in_place(&GateSpec::hadamard_layer([0, 1]))?;
    trace.push(Stage::Hadamard1, "Hadamard on qubits a and b", state.clone());

    state.apply_in_place(&GateSpec::oracle(f.clone(), layout))?;
    trace.push(Stage::Manipulation, format!("U_f with f = {f}"), state.clone());

    state.apply_in_place(&GateSpec::hadamard(0))?;
    trace.push(Stage::Hadamard2, "Hadamard on qubit a", state.clone());

    let dist = state.outcome_distribution(&[0])?;
    let measured = measure_qubits(&state, &[0], rng_seed)?;
    let outcome_bit = measured.outcome as u8;
    trace.push(
        Stage::Measurement,
        format!("measure qubit a -> {outcome_bit}"),
        measured.post_state,
    );

    Ok(DeutschResult {
        outcome_bit,
        outcome_probability: dist[measured.outcome],
        verdict: verdict_for(outcome_bit),
        sampled_outcome: measured.outcome,
        layout,
        trace,
    })
}

/// Run the three-stage pipeline for any `f`, without checking the promise.
///
/// Register A holds `f.n()` qubits starting in `|0...0>`, register B one qubit in `|1>`.
pub fn pipeline_trace(f: &BooleanFunction, rng_seed: u64) -> Result<(StepTrace, RegisterLayout)> {
    let (trace, layout, _) = run_pipeline(f, rng_seed)?;
    Ok((trace, layout))
}

fn run_pipeline(f: &BooleanFunction, rng_seed: u64) -> Result<(StepTrace, RegisterLayout, usize)> {
    let n = f.n();
    let layout = RegisterLayout::new(n, 1)?;
    let register_a = layout.register_a();
    let mut trace = StepTrace::new();

    let mut state = StateVector::basis_state(n + 1, layout.join(0, 1))?;
    trace.push(Stage::Init, format!("prepare |0>^{n} |1>"), state.clone());

    state.apply_in_place(&GateSpec::hadamard_layer(0..=n))?;
    trace.push(
        Stage::Hadamard1,
        format!("Hadamard on all {} qubits", n + 1),
        state.clone(),
    );

    state.apply_in_place(&GateSpec::oracle(f.clone(), layout))?;
    trace.push(Stage::Manipulation, format!("U_f with f = {f}"), state.clone());

    state.apply_in_place(&GateSpec::hadamard_layer(register_a.iter().copied()))?;
    trace.push(Stage::Hadamard2, "Hadamard on register A", state.clone());

    let measured = measure_qubits(&state, &register_a, rng_seed)?;
    trace.push(
        Stage::Measurement,
        format!("measure register A -> {}", layout.label_string(measured.outcome)),
        measured.post_state,
    );
    Ok((trace, layout, measured.outcome))
}

/// Deutsch–Jozsa: decide constant vs balanced with one oracle call.
///
/// The verdict is read from the exact all-zeros probability, never from the sample.
pub fn pipeline_run(f: &BooleanFunction, rng_seed: u64) -> Result<DeutschResult> {
    if f.classify() == FunctionClass::Neither {
        return Err(Error::PromiseViolation);
    }
    let (trace, layout, sampled_outcome) = run_pipeline(f, rng_seed)?;
    let measured = trace.measured_state().expect("pipeline records states");
    let p_zero = measured.outcome_distribution(&layout.register_a())?[0];
    let outcome_bit = u8::from(p_zero < 0.5);
    let outcome_probability = if outcome_bit == 0 { p_zero } else { 1.0 - p_zero };
    Ok(DeutschResult {
        outcome_bit,
        outcome_probability,
        verdict: verdict_for(outcome_bit),
        sampled_outcome,
        layout,
        trace,
    })
}

/// A classical oracle that counts how often it is consulted.
#[derive(Debug)]
pub struct CountingOracle<'a> {
    f: &'a BooleanFunction,
    queries: Cell<usize>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(f: &'a BooleanFunction) -> Self {
        Self {
            f,
            queries: Cell::new(0),
        }
    }

    pub fn query(&self, x: usize) -> Result<bool> {
        if x >= 1 << self.f.n() {
            return Err(Error::IndexOutOfRange {
                index: x,
                num_qubits: self.f.n(),
            });
        }
        self.queries.set(self.queries.get() + 1);
        Ok(self.f.eval(x))
    }

    pub fn queries(&self) -> usize {
        self.queries.get()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalQuery {
    pub value: u8,
    pub queries: usize,
}

/// Evaluate `f(x)` once by table lookup.
pub fn classical_single_query(f: &BooleanFunction, x: usize) -> Result<ClassicalQuery> {
    let oracle = CountingOracle::new(f);
    let value = u8::from(oracle.query(x)?);
    Ok(ClassicalQuery {
        value,
        queries: oracle.queries(),
    })
}

/// The classical single query as a reversible computation: `|x,0> -> |x,f(x)>`, then read out.
pub fn classical_query_trace(f: &BooleanFunction, x: usize) -> Result<(StepTrace, RegisterLayout)> {
    let layout = RegisterLayout::new(f.n(), 1)?;
    if x >= 1 << f.n() {
        return Err(Error::IndexOutOfRange {
            index: x,
            num_qubits: f.n(),
        });
    }
    let mut trace = StepTrace::new();
    let mut state = StateVector::basis_state(f.n() + 1, layout.join(x, 0))?;
    trace.push(
        Stage::Init,
        format!("prepare |{}>|0>", layout.label_string(x)),
        state.clone(),
    );
    state.apply_in_place(&GateSpec::oracle(f.clone(), layout))?;
    trace.push(Stage::Manipulation, "U_f", state.clone());
    trace.push(Stage::Measurement, "read out register B", state);
    Ok((trace, layout))
}
