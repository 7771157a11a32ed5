//! Monte Carlo re-check of the closed-form results against sampled
//! photocurrents, printed as a pass/fail table.

use std::fmt;

use cvqkd_core::gaussian::{
    apply_beamsplitter, build_covariance, conditional_variance_minimum, entanglement_checks,
    eve_delta_covariance_form, eve_delta_printed_form, optimal_gain, predicted_bob_sum_variance, sample_phase_space,
    squeezing_variance, Channel, ModeSample, PairMoments,
};
use cvqkd_core::eavesdropper::delta_discriminator;
use cvqkd_core::seed::{derive_seed, tags};
use cvqkd_core::{Basis, SourceParams};

const SIGMAS: f64 = 5.0;
const ETAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const DELTA_ETA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported for comparison only.
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub measured: f64,
    pub predicted: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl CheckRow {
    fn new(name: String, measured: f64, predicted: f64, tolerance: f64) -> Self {
        let verdict = if (measured - predicted).abs() <= tolerance { Verdict::Pass } else { Verdict::Fail };
        CheckRow {
            name,
            measured,
            predicted,
            tolerance,
            verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<CheckRow>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .map(|r| r.name.as_str())
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "formula checks: n = {} samples, seed = {}", self.samples, self.seed)?;
        writeln!(
            f,
            "{:<34} {:>12} {:>12} {:>12}  result",
            "check", "measured", "predicted", "tolerance"
        )?;
        for r in &self.rows {
            let verdict = match r.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Info => "info",
            };
            writeln!(
                f,
                "{:<34} {:>12.6} {:>12.6} {:>12.2e}  {verdict}",
                r.name, r.measured, r.predicted, r.tolerance
            )?;
        }
        Ok(())
    }
}

/// Minimum over g of `((1+g)² v₊ + (1−g)² v₋)/2` by grid then golden
/// section, independent of the closed forms under test.
fn oracle_min(v_plus: f64, v_minus: f64) -> f64 {
    let f = |g: f64| 0.5 * ((1.0 + g).powi(2) * v_plus + (1.0 - g).powi(2) * v_minus);
    let g0 = (0..=4000)
        .map(|i| -2.0 + i as f64 * 1e-3)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .expect("non-empty grid");
    let (mut lo, mut hi) = (g0 - 1e-3, g0 + 1e-3);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f(0.5 * (lo + hi))
}

/// Runs every check on the amplitude block of `source`.
pub fn validate_formulas(source: &SourceParams, samples: usize, seed: u64) -> cvqkd_core::Result<ValidationReport> {
    let (v_plus, v_minus) = source.channel_pair(Basis::AQ);
    let cov = build_covariance(source);
    let mut rows = Vec::new();

    for (i, &eta) in ETAS.iter().enumerate() {
        let point_seed = derive_seed(seed, tags::SWEEP, i as u64);
        let draws = sample_phase_space(&cov, samples, point_seed)?;
        let alice: Vec<f64> = draws.iter().map(|d| d.dx1).collect();
        let beam2: Vec<ModeSample> = draws.iter().map(|d| ModeSample { x: d.dx2, y: d.dy2 }).collect();
        let (bob, tapped) = apply_beamsplitter(&beam2, eta, point_seed)?;
        let bob: Vec<f64> = bob.iter().map(|m| m.x).collect();

        let v = squeezing_variance(&bob, &alice, 1.0, Channel::Plus)?;
        rows.push(CheckRow::new(
            format!("bob_sum_variance(eta={eta})"),
            v.value,
            predicted_bob_sum_variance(v_plus, v_minus, eta)?,
            SIGMAS * v.std_error,
        ));

        let m = PairMoments::new(&alice, &bob)?;
        let beta = -m.sab / m.saa;
        let resid = (m.sbb - m.sab * m.sab / m.saa) / (m.n as f64 - 2.0);
        rows.push(CheckRow::new(
            format!("optimal_gain(eta={eta})"),
            beta,
            optimal_gain(v_plus, v_minus, eta)?,
            SIGMAS * (resid / m.saa).sqrt(),
        ));

        if eta == 1.0 {
            let n = m.n as f64;
            let min = (m.sbb - m.sab * m.sab / m.saa) / (n - 1.0);
            rows.push(CheckRow::new(
                "conditional_variance_min".into(),
                min,
                conditional_variance_minimum(v_plus, v_minus)?,
                SIGMAS * min * (2.0 / (n - 1.0)).sqrt(),
            ));
        }

        if eta == DELTA_ETA {
            let eve: Vec<f64> = tapped.iter().map(|m| m.x).collect();
            let (delta, _) = delta_discriminator(&eve, &alice, 1.0, Basis::AQ, 0.0)?;
            let em = PairMoments::new(&eve, &alice)?;
            let n = em.n as f64;
            let cov_se = ((em.saa * em.sbb / (n * n) + (em.sab / n).powi(2)) / n).sqrt();
            rows.push(CheckRow::new(
                format!("eve_delta(eta={eta})"),
                delta,
                eve_delta_covariance_form(1.0, eta, v_plus, v_minus)?,
                SIGMAS * 2.0 * cov_se,
            ));
            rows.push(CheckRow {
                name: format!("eve_delta_sum_form(eta={eta})"),
                measured: delta,
                predicted: eve_delta_printed_form(1.0, eta, v_plus, v_minus)?,
                tolerance: f64::NAN,
                verdict: Verdict::Info,
            });
        }
    }

    let report = entanglement_checks(source);
    let (v_minus_y, v_plus_y) = source.channel_pair(Basis::PQ);
    let oracle = oracle_min(v_plus, v_minus) * oracle_min(v_minus_y, v_plus_y);
    rows.push(CheckRow::new("epr_product".into(), report.epr_product, oracle, 1e-9 * oracle));
    rows.push(CheckRow::new(
        "sum_criterion".into(),
        report.sum_criterion_value,
        v_plus + v_minus_y,
        1e-9 * (v_plus + v_minus_y),
    ));

    Ok(ValidationReport { samples, seed, rows })
}
