use cvqkd_core::eavesdropper::{delta_discriminator, eve_intercept, eve_score, Guess, TapConfig};
use cvqkd_core::gaussian::{build_covariance, sample_phase_space, ModeSample};
use cvqkd_core::protocol::{run_session, Alarm, SessionConfig};
use cvqkd_core::{Basis, SourceParams};

fn source() -> SourceParams {
    SourceParams::new(0.5, 2.0, 0.5, 2.0).unwrap()
}

#[test]
fn untapped_eve_is_guessing() {
    let tap = TapConfig {
        tap_fraction: 0.0,
        ..TapConfig::new(0.5)
    };
    let (mut acc, mut frac, mut n) = (0.0, 0.0, 0.0);
    for s in 0..20 {
        let r = run_session(&source(), Some(&tap), &SessionConfig::new(500, 100, s)).unwrap();
        let score = eve_score(&r, &r.eve_records);
        assert_eq!(score.slots_scored, 500);
        acc += score.discrimination_accuracy;
        frac += score.key_fraction_known;
        n += 1.0;
        // No samples were tapped, so nothing reached Bob disturbed.
        assert!(r.monitor.alarms.is_empty(), "seed {s}: {:?}", r.monitor.alarms);
    }
    assert!((acc / n - 0.5).abs() < 0.02, "{}", acc / n);
    assert!((frac / n - 0.25).abs() < 0.02, "{}", frac / n);
}

#[test]
fn strong_tap_discriminates_and_is_caught() {
    let p = SourceParams::new(0.25, 4.0, 0.25, 4.0).unwrap();
    let r = run_session(&p, Some(&TapConfig::new(0.5)), &SessionConfig::new(400, 1000, 12)).unwrap();
    let score = eve_score(&r, &r.eve_records);
    assert!(score.discrimination_accuracy > 0.9, "{score:?}");
    assert!(r.monitor.alarms.contains(&Alarm::GainDrift));
    let eta = r.monitor.inferred_eta.unwrap();
    assert!((eta - 0.5).abs() < 0.1, "{eta}");
}

#[test]
fn raising_eves_gain_buys_nothing() {
    // Δ is linear in g_e, so scaling the gain and the threshold together
    // leaves every verdict unchanged.
    for (g, explicit) in [(3.0, true), (0.2, true), (5.0, false)] {
        let mut base = TapConfig::new(0.7);
        let mut scaled = TapConfig { g_e: g, ..base };
        if explicit {
            base.delta_threshold = Some(0.4);
            scaled.delta_threshold = Some(0.4 * g);
        }
        let config = SessionConfig::new(300, 300, 77);
        let a = run_session(&source(), Some(&base), &config).unwrap();
        let b = run_session(&source(), Some(&scaled), &config).unwrap();
        let guesses = |r: &cvqkd_core::protocol::SessionResult| r.eve_records.iter().map(|e| e.guess).collect::<Vec<_>>();
        assert_eq!(guesses(&a), guesses(&b));
        assert_eq!(eve_score(&a, &a.eve_records), eve_score(&b, &b.eve_records));
        // Bob sees the same disturbance either way.
        assert_eq!(a.alice_key, b.alice_key);
        assert_eq!(a.monitor, b.monitor);
    }
}

#[test]
fn delta_is_centred_on_zero_for_mismatched_quadratures() {
    let p = SourceParams::new(0.25, 4.0, 0.25, 4.0).unwrap();
    let cov = build_covariance(&p);
    let tap = TapConfig::new(0.5);
    let deltas: Vec<f64> = (0..200)
        .map(|k| {
            let draws = sample_phase_space(&cov, 2000, 300 + k).unwrap();
            let beam2: Vec<ModeSample> = draws.iter().map(|d| ModeSample { x: d.dx2, y: d.dy2 }).collect();
            let i = eve_intercept(&beam2, &tap, 300 + k, k as usize).unwrap();
            let alice: Vec<f64> = draws
                .iter()
                .map(|d| if i.eve_basis == Basis::AQ { d.dy1 } else { d.dx1 })
                .collect();
            delta_discriminator(&i.tapped, &alice, 1.0, i.eve_basis, 0.0).unwrap().0
        })
        .collect();
    let n = deltas.len() as f64;
    let m = deltas.iter().sum::<f64>() / n;
    let sd = (deltas.iter().map(|d| (d - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!(m.abs() < 5.0 * sd / n.sqrt(), "{m} ± {}", sd / n.sqrt());
    // And a null slot almost never clears the default threshold.
    let threshold = tap.threshold_for(&p, Basis::AQ);
    assert!(deltas.iter().filter(|&&d| d > threshold).count() <= 2);
}

#[test]
fn stronger_taps_hurt_more() {
    let rate = |eta: f64, f: f64| {
        let tap = TapConfig {
            tap_fraction: f,
            ..TapConfig::new(eta)
        };
        (0..10)
            .map(|s| {
                let r = run_session(&source(), Some(&tap), &SessionConfig::new(200, 500, 900 + s)).unwrap();
                (
                    eve_score(&r, &r.eve_records).discrimination_accuracy,
                    r.monitor.inferred_eta.unwrap_or(f64::NAN),
                )
            })
            .fold((0.0, 0.0), |acc, x| (acc.0 + x.0 / 10.0, acc.1 + x.1 / 10.0))
    };
    let weak = rate(0.95, 0.2);
    let strong = rate(0.6, 1.0);
    assert!(strong.0 > weak.0);
    assert!(strong.1 < weak.1);
}

#[test]
fn records_line_up_with_slots() {
    let r = run_session(&source(), Some(&TapConfig::new(0.8)), &SessionConfig::new(50, 40, 5)).unwrap();
    assert_eq!(r.eve_records.len(), 50);
    for (k, rec) in r.eve_records.iter().enumerate() {
        assert_eq!(rec.slot_index, k);
        assert_eq!(rec.tapped.len(), 40);
        assert_eq!(rec.basis_guess.is_some(), rec.guess == Guess::Match);
    }
}
