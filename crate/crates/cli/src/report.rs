//! Versioned JSON report documents.
//!
//! Every real number is written with 17 significant digits in exponent form,
//! which round-trips any `f64` exactly. Parsing a document and writing it out
//! again reproduces the input byte for byte.

use qworlds::decoherence::{BranchReport, CoherenceSeries};
use qworlds::statecore::Amplitude;
use qworlds::worlds::{InformationAudit, WorldTrace};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

pub const FORMAT_VERSION: u32 = 1;

/// A float that serializes with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom(format!("non-finite number {}", self.0)));
        }
        // + 0.0 turns -0 into 0
        let text = format!("{:.16e}", self.0 + 0.0);
        RawValue::from_string(text)
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Sig17 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Sig17)
    }
}

impl From<f64> for Sig17 {
    fn from(x: f64) -> Self {
        Sig17(x)
    }
}

pub fn complex_pair(z: Amplitude) -> [Sig17; 2] {
    [Sig17(z.re), Sig17(z.im)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub seed: u64,
    pub threshold: Sig17,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Sig17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub env_qubits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome_bit: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome_probability: Option<Sig17>,
    pub sampled_outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldEntry {
    pub label: String,
    pub weight: Sig17,
    pub relative_state: Vec<[Sig17; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEntry {
    pub step_index: usize,
    pub stage: String,
    pub description: String,
    pub world_count: usize,
    pub residual: Sig17,
    pub worlds: Vec<WorldEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventEntry {
    pub step_index: usize,
    pub kind: String,
    pub count_before: usize,
    pub count_after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReappearanceEntry {
    pub label: String,
    pub vanished_at: usize,
    pub reappeared_at: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub worlds_max: usize,
    pub bits_per_world: usize,
    pub classical_bits_to_describe: u64,
    pub retrievable_bits: Sig17,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_shannon_bits: Option<Sig17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_von_neumann_bits: Option<Sig17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_query_bits: Option<Sig17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum_output_bits: Option<Sig17>,
}

impl From<&InformationAudit> for AuditEntry {
    fn from(a: &InformationAudit) -> Self {
        AuditEntry {
            worlds_max: a.worlds_max,
            bits_per_world: a.bits_per_world,
            classical_bits_to_describe: a.classical_bits_to_describe,
            retrievable_bits: Sig17(a.retrievable_bits),
            output_shannon_bits: None,
            output_von_neumann_bits: None,
            classical_query_bits: None,
            quantum_output_bits: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleEntry {
    pub t: usize,
    pub offdiag_norm: Sig17,
}

fn samples(series: &CoherenceSeries) -> Vec<SampleEntry> {
    series
        .samples
        .iter()
        .map(|s| SampleEntry {
            t: s.t,
            offdiag_norm: Sig17(s.offdiag_norm),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchEntry {
    pub classification: String,
    pub threshold: Sig17,
    pub window: usize,
    pub defaults_used: bool,
    pub series: Vec<SampleEntry>,
}

impl From<&BranchReport> for BranchEntry {
    fn from(r: &BranchReport) -> Self {
        BranchEntry {
            classification: r.classification.as_str().to_string(),
            threshold: Sig17(r.threshold),
            window: r.window,
            defaults_used: r.defaults_used,
            series: samples(&r.series),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceEntry {
    pub system: String,
    pub coupling_angles: Vec<Sig17>,
    pub environment: BranchEntry,
    pub dephasing: BranchEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub format_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub settings: Option<RunSettings>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<RunResult>,
    pub steps: Vec<StepEntry>,
    pub events: Vec<EventEntry>,
    pub reappearances: Vec<ReappearanceEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoherence: Option<DecoherenceEntry>,
}

impl TraceDocument {
    pub fn empty(format_version: u32) -> Self {
        TraceDocument {
            format_version,
            command: None,
            settings: None,
            result: None,
            steps: Vec::new(),
            events: Vec::new(),
            reappearances: Vec::new(),
            audit: None,
            decoherence: None,
        }
    }

    pub fn from_trace(trace: &WorldTrace, audit: Option<&InformationAudit>, format_version: u32) -> Self {
        let steps = trace
            .per_step
            .iter()
            .map(|s| StepEntry {
                step_index: s.step_index,
                stage: s.stage.as_str().to_string(),
                description: s.description.clone(),
                world_count: s.world_count,
                residual: Sig17(s.decomposition.residual),
                worlds: s
                    .decomposition
                    .worlds
                    .iter()
                    .map(|w| WorldEntry {
                        label: w.label.clone(),
                        weight: Sig17(w.weight),
                        relative_state: w.relative_state.amplitudes().iter().map(|&z| complex_pair(z)).collect(),
                    })
                    .collect(),
            })
            .collect();
        let events = trace
            .events
            .iter()
            .map(|e| EventEntry {
                step_index: e.step_index,
                kind: e.kind.as_str().to_string(),
                count_before: e.count_before,
                count_after: e.count_after,
            })
            .collect();
        let reappearances = trace
            .reappearances
            .iter()
            .map(|r| ReappearanceEntry {
                label: r.label.clone(),
                vanished_at: r.vanished_at,
                reappeared_at: r.reappeared_at,
            })
            .collect();
        TraceDocument {
            steps,
            events,
            reappearances,
            audit: audit.map(AuditEntry::from),
            ..TraceDocument::empty(format_version)
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Serialize a world trace and optional audit as a standalone document.
pub fn serialize_trace(trace: &WorldTrace, audit: Option<&InformationAudit>, format_version: u32) -> String {
    TraceDocument::from_trace(trace, audit, format_version)
        .to_json()
        .expect("trace documents contain only finite numbers")
}
