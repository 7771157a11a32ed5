use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Amplitude and phase fluctuation of a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModeSample {
    pub x: f64,
    pub y: f64,
}

/// Lossless beam splitter of power transmissivity `eta`, with vacuum
/// entering the unused port.
///
/// transmitted = √η·in + √(1−η)·vac, tapped = √(1−η)·in − √η·vac
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    eta: f64,
    t: f64,
    r: f64,
}

impl BeamSplitter {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::invalid("eta", format!("must lie in [0, 1], got {eta}")));
        }
        Ok(BeamSplitter {
            eta,
            t: eta.sqrt(),
            r: (1.0 - eta).sqrt(),
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Returns `(transmitted, tapped)`. Fresh unit-variance vacuum is drawn
    /// for each quadrature.
    #[inline]
    pub fn split<R: Rng + ?Sized>(&self, rng: &mut R, input: ModeSample) -> (ModeSample, ModeSample) {
        let vx: f64 = rng.sample(StandardNormal);
        let vy: f64 = rng.sample(StandardNormal);
        (
            ModeSample {
                x: self.t * input.x + self.r * vx,
                y: self.t * input.y + self.r * vy,
            },
            ModeSample {
                x: self.r * input.x - self.t * vx,
                y: self.r * input.y - self.t * vy,
            },
        )
    }
}

/// Send beam-2 samples through a tap of transmissivity `eta`.
pub fn apply_beamsplitter(beam2: &[ModeSample], eta: f64, seed: u64) -> Result<(Vec<ModeSample>, Vec<ModeSample>)> {
    let bs = BeamSplitter::new(eta)?;
    let mut rng = seed::stream(seed, seed::tags::CHANNEL, 0);
    Ok(beam2.iter().map(|&s| bs.split(&mut rng, s)).unzip())
}
