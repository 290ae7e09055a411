//! Command-line front end for the `qworlds` simulator.
//!
//! Each subcommand runs a library pipeline and renders a [`report::TraceDocument`].
//! Errors carry the process exit code; nothing is written on failure.

pub mod report;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qworlds::algorithms::{deutsch_run, pipeline_run, pipeline_trace, DeutschResult, StepTrace};
use qworlds::decoherence::{
    branch_stability, branch_stability_default, cat_state, coherence_series, default_window, dephase,
    entangle_environment, environment_coherence, BranchReport, CoherenceSeries, EnvironmentModel,
    DEFAULT_BRANCH_THRESHOLD,
};
use qworlds::infometrics::{output_parity, shannon_entropy, von_neumann_entropy};
use qworlds::oracle::{parse_truth_table, BooleanFunction};
use qworlds::statecore::{DensityMatrix, RegisterLayout, MAX_QUBITS};
use qworlds::worlds::{audit_information, track, DEFAULT_WORLD_THRESHOLD};

use report::{DecoherenceEntry, RunResult, RunSettings, Sig17, TraceDocument, FORMAT_VERSION};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_PROMISE: i32 = 4;
pub const EXIT_RESOURCE: i32 = 5;
pub const EXIT_IO: i32 = 1;

/// Longest decoherence run the CLI will simulate.
pub const MAX_STEPS: usize = 4096;

pub const DEFAULT_GAMMA: f64 = 1.0;
pub const DEFAULT_ENV_QUBITS: usize = 6;
pub const DEFAULT_STEPS: usize = 24;

#[derive(Debug, Parser)]
#[command(
    name = "qworlds",
    version,
    about = "Trace computational worlds through quantum algorithms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-qubit Deutsch algorithm on a 1-bit function.
    Deutsch(FunctionArgs),
    /// Deutsch–Jozsa on an n-bit function promised constant or balanced.
    Dj(FunctionArgs),
    /// Pipeline world trace for any n-bit function.
    WorldsTrace(FunctionArgs),
    /// World trace plus storage and output-entropy accounting.
    Audit(FunctionArgs),
    /// Cat state coupled to an environment; branch classification.
    Decohere(DecohereArgs),
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Truth table such as `0110`, or `@path` to a file holding one.
    #[arg(long = "f", value_name = "TABLE")]
    pub f: String,
    /// Input bits; must agree with the table length.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// World weight cutoff (default 1e-10).
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecohereArgs {
    /// Per-step dephasing rate.
    #[arg(long, default_value_t = DEFAULT_GAMMA, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = DEFAULT_ENV_QUBITS)]
    pub env_qubits: usize,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Off-diagonal cutoff for branch classification (default 1e-6).
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Deutsch,
    Dj,
    WorldsTrace,
    Audit,
    Decohere,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Deutsch => "deutsch",
            CommandKind::Dj => "dj",
            CommandKind::WorldsTrace => "worlds-trace",
            CommandKind::Audit => "audit",
            CommandKind::Decohere => "decohere",
        }
    }
}

/// Everything one invocation needs, independent of how it was parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub function_source: Option<String>,
    pub n: Option<usize>,
    pub seed: u64,
    pub threshold: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub gamma: f64,
    pub env_qubits: usize,
    pub steps: usize,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let function = |kind, a: FunctionArgs| RunConfig {
            command: kind,
            function_source: Some(a.f),
            n: a.n,
            seed: a.seed,
            threshold: a.threshold,
            output_path: a.out,
            gamma: DEFAULT_GAMMA,
            env_qubits: DEFAULT_ENV_QUBITS,
            steps: DEFAULT_STEPS,
        };
        match cli.command {
            Command::Deutsch(a) => function(CommandKind::Deutsch, a),
            Command::Dj(a) => function(CommandKind::Dj, a),
            Command::WorldsTrace(a) => function(CommandKind::WorldsTrace, a),
            Command::Audit(a) => function(CommandKind::Audit, a),
            Command::Decohere(a) => RunConfig {
                command: CommandKind::Decohere,
                function_source: None,
                n: None,
                seed: a.seed,
                threshold: a.threshold,
                output_path: a.out,
                gamma: a.gamma,
                env_qubits: a.env_qubits,
                steps: a.steps,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<qworlds::Error> for CliError {
    fn from(e: qworlds::Error) -> Self {
        use qworlds::Error as E;
        let code = match e {
            E::PromiseViolation => EXIT_PROMISE,
            E::QubitCap { .. } => EXIT_RESOURCE,
            _ => EXIT_INPUT,
        };
        CliError::new(code, e.to_string())
    }
}

/// Inline table text, or the contents of the file after a leading `@`.
pub fn load_function(source: &str) -> Result<BooleanFunction, CliError> {
    let text = match source.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::new(EXIT_INPUT, format!("cannot read truth table file {path}: {e}")))?,
        None => source.to_string(),
    };
    Ok(parse_truth_table(&text)?)
}

fn function_for(config: &RunConfig) -> Result<BooleanFunction, CliError> {
    let source = config
        .function_source
        .as_deref()
        .ok_or_else(|| CliError::new(EXIT_USAGE, "missing --f"))?;
    let f = load_function(source)?;
    if let Some(n) = config.n {
        if n != f.n() {
            return Err(qworlds::Error::ArityMismatch {
                expected: n,
                actual: f.n(),
            }
            .into());
        }
    }
    Ok(f)
}

fn run_result(f: &BooleanFunction, r: &DeutschResult) -> RunResult {
    RunResult {
        classification: f.classify().as_str().to_string(),
        verdict: Some(r.verdict.as_str().to_string()),
        outcome_bit: Some(r.outcome_bit),
        outcome_probability: Some(Sig17(r.outcome_probability)),
        sampled_outcome: r.layout.label_string(r.sampled_outcome),
    }
}

fn trace_document(
    config: &RunConfig,
    f: &BooleanFunction,
    trace: &StepTrace,
    layout: &RegisterLayout,
    threshold: f64,
) -> Result<TraceDocument, CliError> {
    let worlds = track(trace, layout, threshold)?;
    let audit = audit_information(trace, layout)?;
    let mut doc = TraceDocument::from_trace(&worlds, Some(&audit), FORMAT_VERSION);
    doc.command = Some(config.command.as_str().to_string());
    doc.settings = Some(RunSettings {
        function: Some(f.to_string()),
        n: Some(f.n()),
        seed: config.seed,
        threshold: Sig17(threshold),
        gamma: None,
        env_qubits: None,
        steps: None,
    });
    Ok(doc)
}

fn run_function_command(config: &RunConfig) -> Result<TraceDocument, CliError> {
    let f = function_for(config)?;
    let threshold = config.threshold.unwrap_or(DEFAULT_WORLD_THRESHOLD);
    match config.command {
        CommandKind::Deutsch | CommandKind::Dj => {
            let r = if config.command == CommandKind::Deutsch {
                deutsch_run(&f, config.seed)?
            } else {
                pipeline_run(&f, config.seed)?
            };
            let mut doc = trace_document(config, &f, &r.trace, &r.layout, threshold)?;
            doc.result = Some(run_result(&f, &r));
            Ok(doc)
        }
        CommandKind::WorldsTrace | CommandKind::Audit => {
            let (trace, layout) = pipeline_trace(&f, config.seed)?;
            let mut doc = trace_document(config, &f, &trace, &layout, threshold)?;
            let sampled = doc
                .steps
                .last()
                .and_then(|s| s.worlds.first())
                .map(|w| w.label.clone())
                .unwrap_or_default();
            doc.result = Some(RunResult {
                classification: f.classify().as_str().to_string(),
                verdict: None,
                outcome_bit: None,
                outcome_probability: None,
                sampled_outcome: sampled,
            });
            if config.command == CommandKind::Audit {
                let measured = trace.measured_state().expect("pipeline records states");
                let register_a = layout.register_a();
                let audit = doc.audit.as_mut().expect("trace documents carry an audit");
                audit.output_shannon_bits = Some(Sig17(shannon_entropy(&measured.outcome_distribution(&register_a)?)?));
                audit.output_von_neumann_bits =
                    Some(Sig17(von_neumann_entropy(&measured.reduced_density(&register_a)?)?));
                if f.n() == 1 {
                    let parity = output_parity(0)?;
                    audit.quantum_output_bits = Some(Sig17(parity.quantum_bits));
                    audit.classical_query_bits = Some(Sig17(parity.classical_bits));
                }
            }
            Ok(doc)
        }
        CommandKind::Decohere => unreachable!("handled by run_decohere"),
    }
}

fn classify(series: &CoherenceSeries, threshold: Option<f64>) -> Result<BranchReport, CliError> {
    Ok(match threshold {
        None => branch_stability_default(series)?,
        Some(t) => branch_stability(series, t, default_window(series.len()))?,
    })
}

fn run_decohere(config: &RunConfig) -> Result<TraceDocument, CliError> {
    let system = cat_state();
    let total = system.num_qubits() + config.env_qubits;
    if total > MAX_QUBITS {
        return Err(qworlds::Error::QubitCap {
            requested: total,
            cap: MAX_QUBITS,
        }
        .into());
    }
    if config.steps > MAX_STEPS {
        return Err(CliError::new(
            EXIT_RESOURCE,
            format!("{} steps requested, cap is {MAX_STEPS}", config.steps),
        ));
    }
    let env = EnvironmentModel {
        rng_seed: config.seed,
        ..EnvironmentModel::binary_ladder(config.env_qubits)
    };
    let coupled = entangle_environment(&system, &env, config.steps)?;
    let environment = classify(&environment_coherence(&coupled), config.threshold)?;
    let dephased = dephase(&DensityMatrix::from_state(&system), config.gamma, config.steps)?;
    let dephasing = classify(&coherence_series(&dephased), config.threshold)?;

    let mut doc = TraceDocument::empty(FORMAT_VERSION);
    doc.command = Some(config.command.as_str().to_string());
    doc.settings = Some(RunSettings {
        function: None,
        n: None,
        seed: config.seed,
        threshold: Sig17(config.threshold.unwrap_or(DEFAULT_BRANCH_THRESHOLD)),
        gamma: Some(Sig17(config.gamma)),
        env_qubits: Some(config.env_qubits),
        steps: Some(config.steps),
    });
    doc.decoherence = Some(DecoherenceEntry {
        system: "cat (|00> + |11>)/sqrt(2)".to_string(),
        coupling_angles: env.coupling_angles.iter().map(|&a| Sig17(a)).collect(),
        note: environment
            .defaults_used
            .then(|| "threshold and window are built-in defaults; set --threshold to override".to_string()),
        environment: (&environment).into(),
        dephasing: (&dephasing).into(),
    });
    Ok(doc)
}

/// Run one command and return the rendered report.
pub fn run_command(config: &RunConfig) -> Result<String, CliError> {
    let doc = match config.command {
        CommandKind::Decohere => run_decohere(config)?,
        _ => run_function_command(config)?,
    };
    doc.to_json()
        .map_err(|e| CliError::new(EXIT_INPUT, format!("cannot serialize report: {e}")))
}

/// Run and deliver the report to `--out` or return it for standard output.
pub fn execute(config: &RunConfig) -> Result<Option<String>, CliError> {
    let text = run_command(config)?;
    match &config.output_path {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
