use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How Bob sets the "correlation detected" threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdPolicy {
    /// Halfway between the source's expected squeezing variance and shot noise.
    Midpoint,
    /// Halfway between the mean variance measured over this many leading
    /// calibration slots and shot noise.
    Calibrated(usize),
}

impl ThresholdPolicy {
    pub fn calibration_slots(&self) -> usize {
        match self {
            ThresholdPolicy::Midpoint => 0,
            ThresholdPolicy::Calibrated(c) => *c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    /// Number of time slots K.
    pub num_slots: usize,
    /// Photocurrent samples per slot M.
    pub samples_per_slot: usize,
    pub threshold_policy: ThresholdPolicy,
    /// Slot repetition rate in slots per second; only used for the bit-rate
    /// report.
    pub rep_rate: f64,
    pub seed: u64,
}

impl SessionConfig {
    pub fn new(num_slots: usize, samples_per_slot: usize, seed: u64) -> Self {
        SessionConfig {
            num_slots,
            samples_per_slot,
            threshold_policy: ThresholdPolicy::Midpoint,
            rep_rate: 1.0e6,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_slots < 1 {
            return Err(Error::invalid("num_slots", "must be at least 1"));
        }
        if self.samples_per_slot < 2 {
            return Err(Error::invalid(
                "samples_per_slot",
                format!("a variance needs at least 2 samples, got {}", self.samples_per_slot),
            ));
        }
        if !(self.rep_rate.is_finite() && self.rep_rate > 0.0) {
            return Err(Error::invalid("rep_rate", format!("must be finite and > 0, got {}", self.rep_rate)));
        }
        if let ThresholdPolicy::Calibrated(c) = self.threshold_policy {
            if c == 0 || c >= self.num_slots {
                return Err(Error::invalid(
                    "threshold_policy",
                    format!("calibration slots must lie in [1, num_slots), got {c}"),
                ));
            }
        }
        Ok(())
    }
}
