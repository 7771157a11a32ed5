//! Closed-form predictions for the undisturbed and tapped transmission.

use crate::error::{Error, Result};

fn check_variances(v_plus: f64, v_minus: f64) -> Result<()> {
    if !(v_plus.is_finite() && v_plus > 0.0) {
        return Err(Error::invalid("v_plus", format!("must be finite and > 0, got {v_plus}")));
    }
    if !(v_minus.is_finite() && v_minus > 0.0) {
        return Err(Error::invalid("v_minus", format!("must be finite and > 0, got {v_minus}")));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::invalid("eta", format!("must lie in [0, 1], got {eta}")));
    }
    Ok(())
}

/// Gain on Alice's classically transmitted photocurrent that minimizes
/// `Var(δX_Bob + g·δX_Alice)` when beam 2 passed a tap of transmissivity
/// `eta`:
///
/// `g = √η · (v₋ − v₊) / (v₋ + v₊)`
///
/// `v_plus` is the squeezed channel variance, `v_minus` its anti-squeezed
/// partner, both measured undisturbed at unit gain.
pub fn optimal_gain(v_plus: f64, v_minus: f64, eta: f64) -> Result<f64> {
    check_variances(v_plus, v_minus)?;
    check_eta(eta)?;
    Ok(eta.sqrt() * (v_minus - v_plus) / (v_minus + v_plus))
}

/// Bob's unit-gain sum-channel variance after a tap of transmissivity `eta`:
///
/// `(1+√η)²/4·v₊ + (1−√η)²/4·v₋ + (1−η)/2`
pub fn predicted_bob_sum_variance(v_plus: f64, v_minus: f64, eta: f64) -> Result<f64> {
    check_variances(v_plus, v_minus)?;
    check_eta(eta)?;
    let t = eta.sqrt();
    Ok((1.0 + t).powi(2) / 4.0 * v_plus + (1.0 - t).powi(2) / 4.0 * v_minus + (1.0 - eta) / 2.0)
}

/// Minimum over `g` of the conditional variance `Var(δX₁ + g·δX₂)`:
///
/// `(v₊+v₋)/2 − ((v₋−v₊)/2)² / ((v₊+v₋)/2)`, which simplifies to
/// `2 v₊ v₋ / (v₊ + v₋)`.
pub fn conditional_variance_minimum(v_plus: f64, v_minus: f64) -> Result<f64> {
    check_variances(v_plus, v_minus)?;
    let var = 0.5 * (v_plus + v_minus);
    let cov = 0.5 * (v_minus - v_plus);
    Ok(var - cov * cov / var)
}

/// Eve's expected plus/minus discriminator for a matched quadrature, from
/// covariance algebra on the tapped beam:
/// `Δ = g_E · √(1−η) · (v₋ − v₊)`.
pub fn eve_delta_covariance_form(g_e: f64, eta: f64, v_plus: f64, v_minus: f64) -> Result<f64> {
    check_variances(v_plus, v_minus)?;
    check_eta(eta)?;
    Ok(g_e * (1.0 - eta).sqrt() * (v_minus - v_plus))
}

/// The alternative printed form `Δ = g_E · √(1−η) · (v₊ + v₋)`. Kept for
/// side-by-side reporting; it agrees with [`eve_delta_covariance_form`] only
/// as `v₊ → 0`.
pub fn eve_delta_printed_form(g_e: f64, eta: f64, v_plus: f64, v_minus: f64) -> Result<f64> {
    check_variances(v_plus, v_minus)?;
    check_eta(eta)?;
    Ok(g_e * (1.0 - eta).sqrt() * (v_plus + v_minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{
        apply_beamsplitter, build_covariance, sample_phase_space, squeezing_variance, Channel, ModeSample,
        PairMoments, SourceParams,
    };

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Alice's X and Bob's X after a tap, for source (0.5, 2).
    fn tapped_x(eta: f64, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let p = SourceParams::new(0.5, 2.0, 0.5, 2.0).unwrap();
        let s = sample_phase_space(&build_covariance(&p), n, seed).unwrap();
        let beam2: Vec<ModeSample> = s.iter().map(|p| ModeSample { x: p.dx2, y: p.dy2 }).collect();
        let (tx, _) = apply_beamsplitter(&beam2, eta, seed + 1).unwrap();
        (s.iter().map(|p| p.dx1).collect(), tx.iter().map(|m| m.x).collect())
    }

    #[test]
    fn gain_values() {
        assert_eq!(optimal_gain(0.7, 0.7, 1.0).unwrap(), 0.0);
        assert!(close(optimal_gain(0.5, 2.0, 1.0).unwrap(), 0.6, 1e-15));
        assert!(close(optimal_gain(0.5, 2.0, 0.81).unwrap(), 0.54, 1e-15));
        assert!(optimal_gain(0.0, 2.0, 1.0).is_err());
        assert!(optimal_gain(0.5, 2.0, 1.5).is_err());
    }

    #[test]
    fn gain_matches_regression_on_tapped_samples() {
        for (eta, want) in [(1.0, 0.6), (0.81, 0.54)] {
            let (alice, bob) = tapped_x(eta, 1_000_000, 21);
            let m = PairMoments::new(&bob, &alice).unwrap();
            let grid_best = (0..=2000)
                .map(|i| i as f64 * 1e-3)
                .min_by(|&a, &b| {
                    m.combined_variance(a, Channel::Plus).total_cmp(&m.combined_variance(b, Channel::Plus))
                })
                .unwrap();
            // Regression-slope SE here is ~1e-3; allow 2 grid steps plus 5 SE.
            assert!(close(grid_best, want, 0.002 + 0.005), "eta {eta}: {grid_best}");
        }
    }

    #[test]
    fn bob_sum_variance_values() {
        assert!(close(predicted_bob_sum_variance(0.5, 2.0, 1.0).unwrap(), 0.5, 1e-15));
        assert!(close(predicted_bob_sum_variance(0.5, 2.0, 0.0).unwrap(), 1.125, 1e-15));
        assert!(close(predicted_bob_sum_variance(0.5, 2.0, 0.81).unwrap(), 0.55125, 1e-15));
        assert!(predicted_bob_sum_variance(0.5, 2.0, -0.1).is_err());
    }

    #[test]
    fn bob_sum_variance_monte_carlo() {
        for (i, eta) in [0.0, 0.81].into_iter().enumerate() {
            let (alice, bob) = tapped_x(eta, 1_000_000, 40 + i as u64);
            let v = squeezing_variance(&bob, &alice, 1.0, Channel::Plus).unwrap();
            let want = predicted_bob_sum_variance(0.5, 2.0, eta).unwrap();
            assert!((v.value - want).abs() < 5.0 * v.std_error, "eta {eta}: {v:?} vs {want}");
        }
    }

    #[test]
    fn conditional_minimum_values() {
        assert!(close(conditional_variance_minimum(0.5, 2.0).unwrap(), 0.8, 1e-15));
        assert!(close(conditional_variance_minimum(1.0, 1.0).unwrap(), 1.0, 1e-15));
        let v = conditional_variance_minimum(0.8, 5.0).unwrap();
        assert!(close(v, 2.9 - 4.41 / 2.9, 1e-14));
    }

    #[test]
    fn delta_forms() {
        let cov = eve_delta_covariance_form(1.0, 0.5, 0.25, 4.0).unwrap();
        let printed = eve_delta_printed_form(1.0, 0.5, 0.25, 4.0).unwrap();
        assert!(close(cov, 0.5f64.sqrt() * 3.75, 1e-14));
        assert!(close(printed, 0.5f64.sqrt() * 4.25, 1e-14));
        // Both vanish without a tap.
        assert_eq!(eve_delta_covariance_form(1.0, 1.0, 0.25, 4.0).unwrap(), 0.0);
    }
}
