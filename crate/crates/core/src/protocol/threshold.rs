use super::config::ThresholdPolicy;
use crate::error::{Error, Result};
use crate::gaussian::{SourceParams, VarianceEstimate};

/// Halfway between the expected matched-basis variance and shot noise.
pub fn midpoint_threshold(v_expected: f64) -> Result<f64> {
    if !(v_expected.is_finite() && v_expected > 0.0) {
        return Err(Error::invalid("v_expected", format!("must be finite and > 0, got {v_expected}")));
    }
    Ok(0.5 * (v_expected + 1.0))
}

/// Halfway between the mean calibration-slot variance and shot noise.
///
/// Calibration slots use a public basis schedule, so both parties measured
/// the same quadrature; if their mean variance is not below shot noise the
/// channel shows no correlation at all and calibration fails.
pub fn calibrated_threshold(calibration: &[VarianceEstimate]) -> Result<f64> {
    if calibration.is_empty() {
        return Err(Error::CalibrationFailed("no calibration slots".into()));
    }
    let mean = calibration.iter().map(|v| v.value).sum::<f64>() / calibration.len() as f64;
    if mean >= 1.0 {
        return Err(Error::CalibrationFailed(format!(
            "calibration slots show no correlation (mean variance {mean} >= 1)"
        )));
    }
    midpoint_threshold(mean)
}

/// Threshold for a session. For the midpoint policy the expected variance is
/// the average of the two correlation channels, `(v_plus_x + v_minus_y)/2`.
pub fn compute_threshold(policy: ThresholdPolicy, source: &SourceParams, calibration: &[VarianceEstimate]) -> Result<f64> {
    match policy {
        ThresholdPolicy::Midpoint => midpoint_threshold(0.5 * (source.v_plus_x() + source.v_minus_y())),
        ThresholdPolicy::Calibrated(_) => calibrated_threshold(calibration),
    }
}
