use rand::Rng;
use serde::{Deserialize, Serialize};

use super::discriminator::Guess;
use crate::error::{Error, Result};
use crate::gaussian::{eve_delta_covariance_form, Basis, BeamSplitter, ModeSample, SourceParams};
use crate::seed;

/// Parameters of the tap attack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TapConfig {
    /// Transmissivity of the tapping beam splitter towards Bob.
    pub eta: f64,
    /// Eve's electronic gain on Alice's photocurrent.
    #[serde(default = "default_gain")]
    pub g_e: f64,
    /// Fraction of each slot's samples that Eve taps.
    #[serde(default = "default_fraction")]
    pub tap_fraction: f64,
    /// Discriminator threshold; `None` selects half the expected matched
    /// value for Eve's basis.
    #[serde(default)]
    pub delta_threshold: Option<f64>,
}

fn default_gain() -> f64 {
    1.0
}

fn default_fraction() -> f64 {
    1.0
}

impl TapConfig {
    pub fn new(eta: f64) -> Self {
        TapConfig {
            eta,
            g_e: 1.0,
            tap_fraction: 1.0,
            delta_threshold: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::invalid("eta", format!("must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.g_e.is_finite() && self.g_e > 0.0) {
            return Err(Error::invalid("g_e", format!("must be finite and > 0, got {}", self.g_e)));
        }
        if !(0.0..=1.0).contains(&self.tap_fraction) {
            return Err(Error::invalid(
                "tap_fraction",
                format!("must lie in [0, 1], got {}", self.tap_fraction),
            ));
        }
        if let Some(t) = self.delta_threshold {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::invalid("delta_threshold", format!("must be finite and >= 0, got {t}")));
            }
        }
        Ok(())
    }

    /// Number of tapped samples in a slot of `m` samples.
    pub fn tapped_len(&self, m: usize) -> usize {
        ((self.tap_fraction * m as f64).ceil() as usize).min(m)
    }

    /// Threshold used for a slot in which Eve measured `basis`.
    pub fn threshold_for(&self, source: &SourceParams, basis: Basis) -> f64 {
        self.delta_threshold.unwrap_or_else(|| {
            let (squeezed, anti) = source.channel_pair(basis);
            0.5 * eve_delta_covariance_form(self.g_e, self.eta, squeezed, anti).unwrap_or(0.0)
        })
    }
}

/// What passing one slot through the tap produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Interception {
    /// Beam 2 as it reaches Bob.
    pub bob_stream: Vec<ModeSample>,
    pub eve_basis: Basis,
    /// Eve's measured quadrature on the tapped prefix.
    pub tapped: Vec<f64>,
}

/// Eve's per-slot record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EveRecord {
    pub slot_index: usize,
    pub eve_basis: Basis,
    pub tapped: Vec<f64>,
    /// `None` when fewer than two samples were tapped.
    pub delta: Option<f64>,
    pub guess: Guess,
    /// Alice's basis as Eve believes it; only set on a `Match` guess.
    pub basis_guess: Option<Basis>,
}

/// Route one slot of beam 2 through the tap.
///
/// The first `⌈f·M⌉` samples pass the beam splitter; the rest reach Bob
/// untouched. Eve picks one quadrature for the whole slot, uniformly at
/// random from the `(root, "eve-basis", slot)` stream; the vacuum entering
/// the splitter comes from the `(root, "channel", slot)` stream.
pub fn eve_intercept(beam2: &[ModeSample], config: &TapConfig, root: u64, slot: usize) -> Result<Interception> {
    config.validate()?;
    let eve_basis = if seed::stream(root, seed::tags::EVE_BASIS, slot as u64).random_bool(0.5) {
        Basis::AQ
    } else {
        Basis::PQ
    };
    let n_tap = config.tapped_len(beam2.len());
    let bs = BeamSplitter::new(config.eta)?;
    let mut rng = seed::stream(root, seed::tags::CHANNEL, slot as u64);
    let mut bob_stream = Vec::with_capacity(beam2.len());
    let mut tapped = Vec::with_capacity(n_tap);
    for &s in &beam2[..n_tap] {
        let (tx, tap) = bs.split(&mut rng, s);
        bob_stream.push(tx);
        tapped.push(match eve_basis {
            Basis::AQ => tap.x,
            Basis::PQ => tap.y,
        });
    }
    bob_stream.extend_from_slice(&beam2[n_tap..]);
    Ok(Interception {
        bob_stream,
        eve_basis,
        tapped,
    })
}
