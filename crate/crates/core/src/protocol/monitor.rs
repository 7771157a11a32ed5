//! Bob's security monitoring over a completed session.
//!
//! Three independent checks, each tuned for well under 1% false alarms per
//! honest session:
//!
//! * `mismatch_rate`: the discarded fraction is binomially tested against
//!   the protocol's inherent 50%; alarm when rejected two-sided at
//!   [`MISMATCH_SIGNIFICANCE`] and the fraction is above one half.
//! * `excess_noise`: the mean variance of kept slots exceeds the reference
//!   by more than [`EXCESS_NOISE_SIGMAS`] standard errors.
//! * `gain_drift`: the optimal gain on Alice's current, regressed over all
//!   kept slots, has shrunk. A tap of transmissivity η scales it by √η, so
//!   `(g_est / g_ref)²` estimates η; alarm when that falls below 1 by more
//!   than [`GAIN_DRIFT_SIGMAS`] standard errors.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use super::session::{SlotOutcome, SlotRole};
use crate::gaussian::{Basis, PairMoments, SourceParams};

pub const MISMATCH_SIGNIFICANCE: f64 = 1e-3;
pub const EXCESS_NOISE_SIGMAS: f64 = 5.0;
pub const GAIN_DRIFT_SIGMAS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alarm {
    ExcessNoise,
    MismatchRate,
    GainDrift,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerBasis<T> {
    pub aq: T,
    pub pq: T,
}

impl<T: Copy> PerBasis<T> {
    pub fn get(&self, basis: Basis) -> T {
        match basis {
            Basis::AQ => self.aq,
            Basis::PQ => self.pq,
        }
    }
}

/// What Bob expects from an undisturbed channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorReference {
    /// Expected unit-gain correlation variance of a matched slot.
    pub expected_variance: PerBasis<f64>,
    /// Standard error of `expected_variance` (zero for analytic values).
    pub expected_variance_se: f64,
    /// Sign-aligned covariance between Bob's and Alice's currents, i.e.
    /// `−Cov(δX₁,δX₂)` for AQ and `Cov(δY₁,δY₂)` for PQ.
    pub gain_covariance: PerBasis<f64>,
    /// Variance of Alice's current.
    pub alice_variance: PerBasis<f64>,
}

impl MonitorReference {
    /// Reference values of a characterized source behind a lossless channel.
    pub fn from_source(source: &SourceParams) -> Self {
        MonitorReference {
            expected_variance: PerBasis {
                aq: source.v_plus_x(),
                pq: source.v_minus_y(),
            },
            expected_variance_se: 0.0,
            gain_covariance: PerBasis {
                aq: 0.5 * (source.v_minus_x() - source.v_plus_x()),
                pq: 0.5 * (source.v_plus_y() - source.v_minus_y()),
            },
            alice_variance: PerBasis {
                aq: source.beam_variance(Basis::AQ),
                pq: source.beam_variance(Basis::PQ),
            },
        }
    }

    /// Replace the expected variance by a measured calibration mean.
    pub fn with_measured_variance(mut self, mean: f64, se: f64) -> Self {
        self.expected_variance = PerBasis { aq: mean, pq: mean };
        self.expected_variance_se = se;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub key_slots: usize,
    pub mismatch_fraction: f64,
    pub mismatch_p_value: f64,
    pub mean_kept_variance: Option<f64>,
    pub expected_kept_variance: Option<f64>,
    /// `None` when no slot was kept (gain undefined).
    pub estimated_gain: Option<f64>,
    pub calibration_gain: Option<f64>,
    pub inferred_eta: Option<f64>,
    pub inferred_eta_std_error: Option<f64>,
    pub alarms: BTreeSet<Alarm>,
}

impl MonitorReport {
    pub fn gain_defined(&self) -> bool {
        self.estimated_gain.is_some()
    }
}

/// Two-sided exact binomial p-value for `k` successes in `n` fair trials.
fn binomial_two_sided(k: u64, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let dist = Binomial::new(0.5, n).expect("p = 0.5 is valid");
    let lower = dist.cdf(k);
    let upper = if k == 0 { 1.0 } else { 1.0 - dist.cdf(k - 1) };
    (2.0 * lower.min(upper)).min(1.0)
}

pub fn monitor_session(slots: &[SlotOutcome], announced: &[usize], reference: &MonitorReference) -> MonitorReport {
    let mut alarms = BTreeSet::new();

    let key_slots = slots.iter().filter(|s| s.role == SlotRole::Key).count();
    let discarded = key_slots.saturating_sub(announced.len());
    let mismatch_fraction = if key_slots == 0 { 0.0 } else { discarded as f64 / key_slots as f64 };
    let mismatch_p_value = binomial_two_sided(discarded as u64, key_slots as u64);
    if mismatch_p_value < MISMATCH_SIGNIFICANCE && mismatch_fraction > 0.5 {
        alarms.insert(Alarm::MismatchRate);
    }

    let kept: Vec<&SlotOutcome> = announced.iter().filter_map(|&k| slots.get(k)).collect();

    // Excess noise: residuals of kept-slot variances against the reference.
    let (mut mean_kept_variance, mut expected_kept_variance) = (None, None);
    if !kept.is_empty() {
        let n = kept.len() as f64;
        let mean = kept.iter().map(|s| s.v_est.value).sum::<f64>() / n;
        let expected = kept.iter().map(|s| reference.expected_variance.get(s.bob_basis)).sum::<f64>() / n;
        mean_kept_variance = Some(mean);
        expected_kept_variance = Some(expected);
        if kept.len() >= 2 {
            let resid_mean = mean - expected;
            let resid_var = kept
                .iter()
                .map(|s| (s.v_est.value - reference.expected_variance.get(s.bob_basis) - resid_mean).powi(2))
                .sum::<f64>()
                / (n - 1.0);
            let se = (resid_var / n + reference.expected_variance_se.powi(2)).sqrt();
            if resid_mean > EXCESS_NOISE_SIGMAS * se {
                alarms.insert(Alarm::ExcessNoise);
            }
        }
    }

    // Gain drift: pooled within-slot regression of Bob's current on Alice's,
    // sign-aligned so both bases estimate a positive gain.
    let mut pooled = PairMoments::default();
    let (mut ref_num, mut ref_den) = (0.0, 0.0);
    for s in &kept {
        let Ok(mut m) = PairMoments::new(&s.alice_current, &s.bob_current) else {
            continue;
        };
        if s.bob_basis == Basis::PQ {
            m.sab = -m.sab;
        }
        ref_num += m.dof() * reference.gain_covariance.get(s.bob_basis);
        ref_den += m.dof() * reference.alice_variance.get(s.bob_basis);
        pooled = pooled.pool(&m);
    }
    let (mut estimated_gain, mut calibration_gain, mut inferred_eta, mut inferred_eta_std_error) =
        (None, None, None, None);
    if pooled.n >= 2 && pooled.saa > 0.0 && ref_den > 0.0 && ref_num > 0.0 {
        let beta = -pooled.sab / pooled.saa;
        let beta_ref = ref_num / ref_den;
        let n_dof: f64 = kept.iter().map(|s| s.alice_current.len() as f64 - 1.0).sum();
        let resid = ((pooled.sbb - pooled.sab * pooled.sab / pooled.saa) / (n_dof - 1.0).max(1.0)).max(0.0);
        let se_beta = (resid / pooled.saa).sqrt();
        let ratio = (beta / beta_ref).max(0.0);
        let eta = ratio * ratio;
        let se_eta = 2.0 * ratio * se_beta / beta_ref;
        if 1.0 - eta > GAIN_DRIFT_SIGMAS * se_eta {
            alarms.insert(Alarm::GainDrift);
        }
        estimated_gain = Some(beta);
        calibration_gain = Some(beta_ref);
        inferred_eta = Some(eta.min(1.0));
        inferred_eta_std_error = Some(se_eta);
    }

    MonitorReport {
        key_slots,
        mismatch_fraction,
        mismatch_p_value,
        mean_kept_variance,
        expected_kept_variance,
        estimated_gain,
        calibration_gain,
        inferred_eta,
        inferred_eta_std_error,
        alarms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::VarianceEstimate;
    use std::sync::Arc;

    fn slot(k: usize, alice: Vec<f64>, bob: Vec<f64>, v: f64) -> SlotOutcome {
        SlotOutcome {
            slot_index: k,
            role: SlotRole::Key,
            alice_basis: Basis::AQ,
            bob_basis: Basis::PQ,
            alice_current: Arc::from(alice),
            bob_current: bob,
            v_est: VarianceEstimate::from_sample(v, 2),
            kept: false,
        }
    }

    #[test]
    fn binomial_p_values() {
        assert_eq!(binomial_two_sided(0, 0), 1.0);
        assert!((binomial_two_sided(5, 10) - 1.0).abs() < 1e-12);
        // P(X <= 0) = 2^-10.
        assert!((binomial_two_sided(0, 10) - 2.0 / 1024.0).abs() < 1e-12);
        assert!((binomial_two_sided(10, 10) - 2.0 / 1024.0).abs() < 1e-12);
    }

    #[test]
    fn all_mismatched_raises_mismatch_alarm() {
        let slots: Vec<_> = (0..200).map(|k| slot(k, vec![1.0, -1.0], vec![0.5, 0.5], 1.3)).collect();
        let r = monitor_session(&slots, &[], &MonitorReference::from_source(&SourceParams::pure(0.5).unwrap()));
        assert!(r.alarms.contains(&Alarm::MismatchRate));
        assert_eq!(r.mismatch_fraction, 1.0);
        assert!(!r.gain_defined());
        assert_eq!(r.inferred_eta, None);
        assert_eq!(r.mean_kept_variance, None);
    }

    #[test]
    fn empty_session_is_quiet() {
        let r = monitor_session(&[], &[], &MonitorReference::from_source(&SourceParams::pure(0.5).unwrap()));
        assert!(r.alarms.is_empty());
        assert_eq!(r.key_slots, 0);
    }

    #[test]
    fn reference_values() {
        let r = MonitorReference::from_source(&SourceParams::new(0.5, 2.0, 0.5, 2.0).unwrap());
        assert_eq!(r.expected_variance.get(Basis::PQ), 0.5);
        assert_eq!(r.gain_covariance.get(Basis::AQ), 0.75);
        assert_eq!(r.alice_variance.get(Basis::AQ), 1.25);
    }
}
