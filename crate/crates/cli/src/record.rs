use cvqkd_core::protocol::{Alarm, ThresholdPolicy};
use cvqkd_core::SourceParams;
use serde::{Deserialize, Serialize};

/// Parameters a run was executed with, flattened for downstream tools.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub source: SourceParams,
    pub num_slots: usize,
    pub samples_per_slot: usize,
    pub threshold_policy: ThresholdPolicy,
    pub rep_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tap_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_threshold: Option<f64>,
}

/// How often each alarm fired over a run's sessions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlarmCounts {
    pub excess_noise: usize,
    pub mismatch_rate: usize,
    pub gain_drift: usize,
}

impl AlarmCounts {
    pub fn add(&mut self, alarm: Alarm) {
        match alarm {
            Alarm::ExcessNoise => self.excess_noise += 1,
            Alarm::MismatchRate => self.mismatch_rate += 1,
            Alarm::GainDrift => self.gain_drift += 1,
        }
    }
}

/// One JSON line of output: a summary over the `repetitions` sessions run
/// for one parameter point.
///
/// `seed` is the root seed; `session_seeds[r]` reproduces repetition `r` on
/// its own. Means skip sessions where the quantity is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment_id: String,
    pub seed: u64,
    pub session_seeds: Vec<u64>,
    pub repetitions: usize,
    pub parameters: RunParameters,
    pub kept_fraction: f64,
    /// Sifted key bits summed over repetitions.
    pub key_length: usize,
    pub keys_agree: bool,
    /// Fraction of sessions with at least one alarm.
    pub alarm_rate: f64,
    pub alarms: AlarmCounts,
    pub inferred_eta: Option<f64>,
    pub estimated_gain: Option<f64>,
    pub threshold: f64,
    pub effective_bit_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eve_accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eve_key_fraction: Option<f64>,
    pub per_slot: bool,
}

impl ResultRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}
