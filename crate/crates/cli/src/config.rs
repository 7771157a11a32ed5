//! Experiment configuration documents (JSON).
//!
//! ```json
//! {
//!   "source": { "squeezing": 0.5 },
//!   "session": { "num_slots": 100, "samples_per_slot": 100 },
//!   "attack": { "eta": 0.64 },
//!   "sweep": { "parameter": "eta", "values": [1.0, 0.81, 0.64] },
//!   "repetitions": 20,
//!   "output_path": "results.jsonl",
//!   "seed": 7
//! }
//! ```

use std::fmt;
use std::path::PathBuf;

use cvqkd_core::eavesdropper::TapConfig;
use cvqkd_core::protocol::{SessionConfig, ThresholdPolicy};
use cvqkd_core::SourceParams;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Either a pure source given by its squeezed variance, or all four
/// mode variances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SourceSpec {
    Squeezing { squeezing: f64 },
    Full(SourceParams),
}

impl SourceSpec {
    pub fn params(&self) -> cvqkd_core::Result<SourceParams> {
        match *self {
            SourceSpec::Squeezing { squeezing } => SourceParams::pure(squeezing),
            SourceSpec::Full(p) => Ok(p),
        }
    }
}

impl Default for SourceSpec {
    fn default() -> Self {
        SourceSpec::Full(SourceParams::new(0.5, 2.0, 0.5, 2.0).expect("valid default"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionSection {
    pub num_slots: usize,
    pub samples_per_slot: usize,
    #[serde(default = "default_policy")]
    pub threshold_policy: ThresholdPolicy,
    #[serde(default = "default_rep_rate")]
    pub rep_rate: f64,
}

fn default_policy() -> ThresholdPolicy {
    ThresholdPolicy::Midpoint
}

fn default_rep_rate() -> f64 {
    1.0e6
}

impl SessionSection {
    pub fn to_session(&self, seed: u64) -> SessionConfig {
        SessionConfig {
            num_slots: self.num_slots,
            samples_per_slot: self.samples_per_slot,
            threshold_policy: self.threshold_policy,
            rep_rate: self.rep_rate,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Eta,
    GE,
    TapFraction,
    DeltaThreshold,
    Squeezing,
    NumSlots,
    SamplesPerSlot,
}

impl SweepParameter {
    fn needs_attack(self) -> bool {
        matches!(
            self,
            SweepParameter::Eta | SweepParameter::GE | SweepParameter::TapFraction | SweepParameter::DeltaThreshold
        )
    }

    fn is_count(self) -> bool {
        matches!(self, SweepParameter::NumSlots | SweepParameter::SamplesPerSlot)
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SweepParameter::Eta => "eta",
            SweepParameter::GE => "g_e",
            SweepParameter::TapFraction => "tap_fraction",
            SweepParameter::DeltaThreshold => "delta_threshold",
            SweepParameter::Squeezing => "squeezing",
            SweepParameter::NumSlots => "num_slots",
            SweepParameter::SamplesPerSlot => "samples_per_slot",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub source: SourceSpec,
    pub session: SessionSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<TapConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Sessions per run (per sweep point).
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

fn default_repetitions() -> usize {
    1
}

impl ExperimentConfig {
    /// A single honest session over `source`.
    pub fn new(source: SourceSpec, num_slots: usize, samples_per_slot: usize, seed: u64) -> Self {
        ExperimentConfig {
            source,
            session: SessionSection {
                num_slots,
                samples_per_slot,
                threshold_policy: ThresholdPolicy::Midpoint,
                rep_rate: default_rep_rate(),
            },
            attack: None,
            sweep: None,
            repetitions: 1,
            output_path: None,
            seed,
        }
    }

    /// Domain checks on every section. Field names are dotted paths into the
    /// document.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_point().map_err(|(field, reason)| domain(field, reason))?;
        if self.repetitions == 0 {
            return Err(domain("repetitions".into(), "must be at least 1".into()));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(domain("sweep.values".into(), "must not be empty".into()));
            }
            if sweep.parameter.needs_attack() && self.attack.is_none() {
                return Err(domain(
                    "sweep.parameter".into(),
                    format!("sweeping {} requires an attack section", sweep.parameter),
                ));
            }
            for (i, &v) in sweep.values.iter().enumerate() {
                let point = self.at_point(sweep.parameter, v).map_err(|reason| domain(format!("sweep.values[{i}]"), reason))?;
                point
                    .validate_point()
                    .map_err(|(field, reason)| domain(format!("sweep.values[{i}]"), format!("{field}: {reason}")))?;
            }
        }
        Ok(())
    }

    fn validate_point(&self) -> Result<(), (String, String)> {
        self.source.params().map_err(|e| ("source".to_string(), core_reason(e)))?;
        self.session
            .to_session(self.seed)
            .validate()
            .map_err(|e| (format!("session.{}", core_field(&e).unwrap_or("")), core_reason(e)))?;
        if let Some(attack) = &self.attack {
            attack
                .validate()
                .map_err(|e| (format!("attack.{}", core_field(&e).unwrap_or("")), core_reason(e)))?;
        }
        Ok(())
    }

    /// The config at one sweep value, with the sweep removed.
    pub fn at_point(&self, parameter: SweepParameter, value: f64) -> Result<ExperimentConfig, String> {
        let mut c = self.clone();
        c.sweep = None;
        if parameter.is_count() && !(value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
            return Err(format!("{parameter} must be a non-negative integer, got {value}"));
        }
        match parameter {
            SweepParameter::Eta => attack_mut(&mut c, parameter)?.eta = value,
            SweepParameter::GE => attack_mut(&mut c, parameter)?.g_e = value,
            SweepParameter::TapFraction => attack_mut(&mut c, parameter)?.tap_fraction = value,
            SweepParameter::DeltaThreshold => attack_mut(&mut c, parameter)?.delta_threshold = Some(value),
            SweepParameter::Squeezing => c.source = SourceSpec::Squeezing { squeezing: value },
            SweepParameter::NumSlots => c.session.num_slots = value as usize,
            SweepParameter::SamplesPerSlot => c.session.samples_per_slot = value as usize,
        }
        Ok(c)
    }

    /// One derived config per sweep value, in sweep order; just `self` when
    /// there is no sweep.
    pub fn points(&self) -> Vec<ExperimentConfig> {
        match &self.sweep {
            None => vec![self.clone()],
            Some(s) => s
                .values
                .iter()
                .map(|&v| self.at_point(s.parameter, v).expect("validated sweep"))
                .collect(),
        }
    }
}

fn attack_mut(c: &mut ExperimentConfig, parameter: SweepParameter) -> Result<&mut TapConfig, String> {
    c.attack
        .as_mut()
        .ok_or_else(|| format!("sweeping {parameter} requires an attack section"))
}

fn core_field(e: &cvqkd_core::Error) -> Option<&'static str> {
    match e {
        cvqkd_core::Error::InvalidInput { field, .. } => Some(field),
        _ => None,
    }
}

fn core_reason(e: cvqkd_core::Error) -> String {
    match e {
        cvqkd_core::Error::InvalidInput { field, reason } => format!("{field} {reason}"),
        other => other.to_string(),
    }
}

fn domain(field: String, reason: String) -> ConfigError {
    ConfigError::Domain {
        field,
        reason,
        line: None,
    }
}

/// 1-based line of the first `"key"` occurrence, for pointing domain errors
/// back into the document.
fn key_line(text: &str, field: &str) -> Option<usize> {
    let leaf = field.rsplit('.').next()?.split('[').next()?;
    let needle = format!("\"{leaf}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

/// Parses and fully validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: untagged_hint(e.to_string()),
    })?;
    config.validate().map_err(|e| match e {
        ConfigError::Domain { field, reason, .. } => ConfigError::Domain {
            line: key_line(text, &field),
            field,
            reason,
        },
        other => other,
    })?;
    Ok(config)
}

fn untagged_hint(message: String) -> String {
    if message.contains("did not match any variant of untagged enum SourceSpec") {
        message.replace(
            "data did not match any variant of untagged enum SourceSpec",
            "source must be {\"squeezing\": v} or all of v_plus_x, v_minus_x, v_minus_y, v_plus_y with valid values",
        )
    } else {
        message
    }
}

/// Canonical pretty-printed form; `parse_config(&emit_config(c)) == c`.
pub fn emit_config(config: &ExperimentConfig) -> String {
    serde_json::to_string_pretty(config).expect("config serializes")
}
