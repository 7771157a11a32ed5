use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{Basis, Channel, PairMoments};

/// Eve's verdict on whether she and Alice measured the same quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Guess {
    Match,
    Mismatch,
}

/// Plus/minus-channel difference between Eve's tapped quadrature and Alice's
/// public photocurrent, both normalized to the two-vacuum shot noise 2:
///
/// `Δ = [V(δE − g·δA) − V(δE + g·δA)] / 2`
///
/// For a phase-quadrature tap the sign is flipped, since phases are
/// correlated where amplitudes are anti-correlated; a matched quadrature then
/// gives a positive Δ in both bases and a mismatched one gives Δ ≈ 0.
///
/// `eve` and `alice` must be aligned sample for sample (Eve's tapped prefix
/// against the same prefix of channel I).
pub fn delta_discriminator(
    eve: &[f64],
    alice: &[f64],
    g_e: f64,
    eve_basis: Basis,
    threshold: f64,
) -> Result<(f64, Guess)> {
    if !g_e.is_finite() {
        return Err(Error::invalid("g_e", "must be finite"));
    }
    let m = PairMoments::new(eve, alice)?;
    let minus = m.combined_variance(g_e, Channel::Minus) / 2.0;
    let plus = m.combined_variance(g_e, Channel::Plus) / 2.0;
    let delta = match eve_basis {
        Basis::AQ => minus - plus,
        Basis::PQ => plus - minus,
    };
    let guess = if delta > threshold { Guess::Match } else { Guess::Mismatch };
    Ok((delta, guess))
}
