use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::bases::choose_bases;
use super::channels::{ChannelIIMessage, ChannelIMessage, ClassicalLog};
use super::config::SessionConfig;
use super::monitor::{monitor_session, MonitorReference, MonitorReport};
use super::sifting::SiftedKey;
use super::threshold::compute_threshold;
use crate::eavesdropper::{delta_discriminator, eve_intercept, EveRecord, Guess, TapConfig};
use crate::error::{Error, Result};
use crate::gaussian::{
    build_covariance, entanglement_checks, squeezing_variance, Basis, CriteriaReport, ModeSample, PhaseSpaceSampler,
    SourceParams, VarianceEstimate,
};
use crate::seed::{self, derive_seed, tags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotRole {
    /// Leading slot on the public calibration schedule; never enters the key.
    Calibration,
    Key,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotOutcome {
    pub slot_index: usize,
    pub role: SlotRole,
    pub alice_basis: Basis,
    pub bob_basis: Basis,
    /// Alice's photocurrent, shared with the channel I log.
    pub alice_current: Arc<[f64]>,
    pub bob_current: Vec<f64>,
    pub v_est: VarianceEstimate,
    pub kept: bool,
}

#[derive(Debug, Clone)]
pub struct SessionResult {
    pub alice_key: SiftedKey,
    pub bob_key: SiftedKey,
    pub slots: Vec<SlotOutcome>,
    pub monitor: MonitorReport,
    pub effective_bit_rate: f64,
    pub threshold: f64,
    pub criteria: CriteriaReport,
    pub log: ClassicalLog,
    /// One record per slot when an attack was simulated, empty otherwise.
    pub eve_records: Vec<EveRecord>,
}

impl SessionResult {
    pub fn kept_fraction(&self) -> f64 {
        if self.monitor.key_slots == 0 {
            return 0.0;
        }
        self.alice_key.len() as f64 / self.monitor.key_slots as f64
    }

    pub fn keys_agree(&self) -> bool {
        self.alice_key == self.bob_key
    }
}

/// Basis both parties use in calibration slot `i`: AQ on even, PQ on odd
/// slots. The schedule is agreed in advance and never transmitted.
pub fn calibration_basis(i: usize) -> Basis {
    if i.is_multiple_of(2) {
        Basis::AQ
    } else {
        Basis::PQ
    }
}

/// Bob's unit-gain correlation variance: the sum channel when he measured
/// the amplitude quadrature, the difference channel for the phase.
pub fn correlation_variance(bob_basis: Basis, bob: &[f64], alice: &[f64]) -> Result<VarianceEstimate> {
    squeezing_variance(bob, alice, 1.0, bob_basis.correlation_channel())
}

/// Bob's keep/discard decision for one slot.
pub fn bob_correlation_test(slot: &SlotOutcome, threshold: f64) -> Result<(bool, VarianceEstimate)> {
    let v = correlation_variance(slot.bob_basis, &slot.bob_current, &slot.alice_current)?;
    Ok((v.value < threshold, v))
}

/// Kept bits per slot times the repetition rate.
pub fn effective_bit_rate(result: &SessionResult, config: &SessionConfig) -> f64 {
    if config.num_slots == 0 {
        return 0.0;
    }
    result.alice_key.len() as f64 / config.num_slots as f64 * config.rep_rate
}

fn quadrature(basis: Basis, x: f64, y: f64) -> f64 {
    match basis {
        Basis::AQ => x,
        Basis::PQ => y,
    }
}

/// Run one session.
///
/// Seeds: the basis records come from `(seed, "alice-basis", 0)` and
/// `(seed, "bob-basis", 0)`; slot `k` draws the source from
/// `(seed, "source", k)` and, under attack, the splitter vacuum and Eve's
/// basis from `(seed, "channel", k)` and `(seed, "eve-basis", k)`.
pub fn run_session(source: &SourceParams, attack: Option<&TapConfig>, config: &SessionConfig) -> Result<SessionResult> {
    config.validate()?;
    if let Some(a) = attack {
        a.validate()?;
    }
    let criteria = entanglement_checks(source);
    if !criteria.squeezed_state_entangled {
        return Err(Error::SessionRefused(format!(
            "source is not squeezed-state entangled (v_plus_x = {}, v_minus_y = {})",
            source.v_plus_x(),
            source.v_minus_y()
        )));
    }

    let k_slots = config.num_slots;
    let m = config.samples_per_slot;
    let n_cal = config.threshold_policy.calibration_slots();
    let root = config.seed;
    let sampler = PhaseSpaceSampler::new(&build_covariance(source))?;

    let mut alice_bases = choose_bases(k_slots, derive_seed(root, tags::ALICE_BASIS, 0));
    let mut bob_bases = choose_bases(k_slots, derive_seed(root, tags::BOB_BASIS, 0));
    for i in 0..n_cal {
        alice_bases[i] = calibration_basis(i);
        bob_bases[i] = calibration_basis(i);
    }

    let mut log = ClassicalLog::default();
    let mut slots = Vec::with_capacity(k_slots);
    let mut eve_records = Vec::new();
    let mut draws = Vec::with_capacity(m);
    let mut beam2 = Vec::with_capacity(m);

    for k in 0..k_slots {
        let (a_basis, b_basis) = (alice_bases[k], bob_bases[k]);
        let mut rng = seed::stream(root, tags::SOURCE, k as u64);
        draws.clear();
        draws.extend((0..m).map(|_| sampler.sample(&mut rng)));

        let alice: Arc<[f64]> = draws.iter().map(|d| quadrature(a_basis, d.dx1, d.dy1)).collect();
        beam2.clear();
        beam2.extend(draws.iter().map(|d| ModeSample { x: d.dx2, y: d.dy2 }));

        // Quantum channel, with Eve's tap if present.
        let interception = match attack {
            Some(cfg) => Some(eve_intercept(&beam2, cfg, root, k)?),
            None => None,
        };
        let arriving: &[ModeSample] = interception.as_ref().map_or(&beam2, |i| &i.bob_stream);
        let bob: Vec<f64> = arriving.iter().map(|s| quadrature(b_basis, s.x, s.y)).collect();

        // Classical channel I: Alice's bare photocurrent.
        log.channel_i.push(ChannelIMessage {
            slot_index: k,
            current: Arc::clone(&alice),
        });

        if let (Some(cfg), Some(i)) = (attack, interception) {
            let threshold = cfg.threshold_for(source, i.eve_basis);
            let (delta, guess) = if i.tapped.len() >= 2 {
                let (d, g) = delta_discriminator(&i.tapped, &alice[..i.tapped.len()], cfg.g_e, i.eve_basis, threshold)?;
                (Some(d), g)
            } else {
                let coin = seed::stream(root, tags::EVE_GUESS, k as u64).random_bool(0.5);
                (None, if coin { Guess::Match } else { Guess::Mismatch })
            };
            eve_records.push(EveRecord {
                slot_index: k,
                eve_basis: i.eve_basis,
                tapped: i.tapped,
                delta,
                guess,
                basis_guess: (guess == Guess::Match).then_some(i.eve_basis),
            });
        }

        let v_est = correlation_variance(b_basis, &bob, &alice)?;
        slots.push(SlotOutcome {
            slot_index: k,
            role: if k < n_cal { SlotRole::Calibration } else { SlotRole::Key },
            alice_basis: a_basis,
            bob_basis: b_basis,
            alice_current: alice,
            bob_current: bob,
            v_est,
            kept: false,
        });
    }

    let calibration: Vec<VarianceEstimate> = slots[..n_cal].iter().map(|s| s.v_est).collect();
    let threshold = compute_threshold(config.threshold_policy, source, &calibration)?;
    let mut reference = MonitorReference::from_source(source);
    if n_cal > 0 {
        let n = n_cal as f64;
        let mean = calibration.iter().map(|v| v.value).sum::<f64>() / n;
        let var = if n_cal > 1 {
            calibration.iter().map(|v| (v.value - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            calibration[0].std_error.powi(2)
        };
        reference = reference.with_measured_variance(mean, (var / n).sqrt());
    }

    let mut announced = Vec::new();
    for slot in slots.iter_mut().filter(|s| s.role == SlotRole::Key) {
        slot.kept = slot.v_est.value < threshold;
        if slot.kept {
            announced.push(slot.slot_index);
        }
    }
    log.channel_ii.push(ChannelIIMessage {
        announced: announced.clone(),
    });

    // Each party keys on its own records.
    let alice_key = SiftedKey::assemble(&alice_bases, &announced);
    let bob_key = SiftedKey::assemble(&bob_bases, &announced);
    debug_assert_eq!(alice_key.slot_indices, bob_key.slot_indices);

    let monitor = monitor_session(&slots, &announced, &reference);
    let mut result = SessionResult {
        alice_key,
        bob_key,
        slots,
        monitor,
        effective_bit_rate: 0.0,
        threshold,
        criteria,
        log,
        eve_records,
    };
    result.effective_bit_rate = effective_bit_rate(&result, config);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{scan_for_basis_labels, Alarm, ThresholdPolicy};

    fn source() -> SourceParams {
        SourceParams::new(0.5, 2.0, 0.5, 2.0).unwrap()
    }

    #[test]
    fn refuses_unentangled_source() {
        let err = run_session(&SourceParams::vacuum(), None, &SessionConfig::new(10, 10, 1)).unwrap_err();
        assert!(matches!(err, Error::SessionRefused(_)));
        let weak = SourceParams::new(0.9, 1.5, 1.2, 1.2).unwrap();
        assert!(matches!(
            run_session(&weak, None, &SessionConfig::new(10, 10, 1)),
            Err(Error::SessionRefused(_))
        ));
    }

    #[test]
    fn small_honest_session() {
        let r = run_session(&source(), None, &SessionConfig::new(200, 500, 3)).unwrap();
        assert_eq!(r.slots.len(), 200);
        assert!(r.keys_agree());
        assert!(r.slots.iter().all(|s| s.alice_current.len() == 500 && s.bob_current.len() == 500));
        assert!(r.slots.iter().all(|s| !s.kept || s.v_est.value < r.threshold));
        for s in &r.slots {
            assert_eq!(s.kept, s.alice_basis == s.bob_basis, "slot {}", s.slot_index);
        }
        assert!(scan_for_basis_labels(&r.log).is_empty());
        assert_eq!(r.log.channel_i.len(), 200);
        assert_eq!(r.log.channel_ii[0].announced, r.alice_key.slot_indices);
    }

    #[test]
    fn slot_test_matches_session_verdicts() {
        let r = run_session(&source(), None, &SessionConfig::new(50, 200, 4)).unwrap();
        for s in &r.slots {
            let (kept, v) = bob_correlation_test(s, r.threshold).unwrap();
            assert_eq!((kept, v), (s.kept, s.v_est));
            assert!(!bob_correlation_test(s, 0.0).unwrap().0);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let c = SessionConfig::new(100, 100, 11);
        let a = run_session(&source(), Some(&TapConfig::new(0.7)), &c).unwrap();
        let b = run_session(&source(), Some(&TapConfig::new(0.7)), &c).unwrap();
        assert_eq!(a.slots, b.slots);
        assert_eq!(a.monitor, b.monitor);
        assert_eq!(a.eve_records, b.eve_records);
    }

    #[test]
    fn calibrated_policy() {
        let mut c = SessionConfig::new(300, 500, 5);
        c.threshold_policy = ThresholdPolicy::Calibrated(50);
        let r = run_session(&source(), None, &c).unwrap();
        assert!((r.threshold - 0.75).abs() < 0.01, "{}", r.threshold);
        assert!(r.slots[..50].iter().all(|s| s.role == SlotRole::Calibration && !s.kept));
        assert!(r.alice_key.slot_indices.iter().all(|&k| k >= 50));
        assert_eq!(r.monitor.key_slots, 250);
        assert!(r.keys_agree());
    }

    #[test]
    fn boundary_source_runs() {
        let eps = 1e-3;
        let p = SourceParams::pure(1.0 - eps).unwrap();
        let r = run_session(&p, None, &SessionConfig::new(100, 100, 6)).unwrap();
        assert_eq!(r.alice_key.slot_indices, r.bob_key.slot_indices);
        assert!(r.threshold < 1.0);
    }

    #[test]
    fn heavy_tap_is_flagged() {
        let r = run_session(&source(), Some(&TapConfig::new(0.3)), &SessionConfig::new(400, 500, 7)).unwrap();
        assert!(!r.monitor.alarms.is_empty());
        assert!(r.monitor.alarms.contains(&Alarm::GainDrift));
        assert_eq!(r.eve_records.len(), 400);
    }

    #[test]
    fn bit_rate() {
        let mut c = SessionConfig::new(100, 100, 8);
        c.rep_rate = 2.0e6;
        let r = run_session(&source(), None, &c).unwrap();
        assert_eq!(effective_bit_rate(&r, &c), r.alice_key.len() as f64 / 100.0 * 2.0e6);
        assert_eq!(r.effective_bit_rate, effective_bit_rate(&r, &c));
    }

    #[test]
    fn zero_eve_samples_means_coin_flip_guesses() {
        let tap = TapConfig {
            tap_fraction: 0.0,
            ..TapConfig::new(0.5)
        };
        let r = run_session(&source(), Some(&tap), &SessionConfig::new(50, 50, 9)).unwrap();
        assert!(r.eve_records.iter().all(|e| e.delta.is_none() && e.tapped.is_empty()));
        let clean = run_session(&source(), None, &SessionConfig::new(50, 50, 9)).unwrap();
        // An f = 0 tap leaves Bob's data untouched.
        assert_eq!(r.slots, clean.slots);
    }
}
