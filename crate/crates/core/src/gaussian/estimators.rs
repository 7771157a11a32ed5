use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of the gain-weighted photocurrent combination `a ± g·b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Plus,
    Minus,
}

impl Channel {
    pub fn sign(self) -> f64 {
        match self {
            Channel::Plus => 1.0,
            Channel::Minus => -1.0,
        }
    }
}

/// A variance with its standard error. `std_error == 0` marks an exact
/// (analytic) value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceEstimate {
    pub value: f64,
    pub n: usize,
    pub std_error: f64,
}

impl VarianceEstimate {
    pub fn exact(value: f64) -> Self {
        VarianceEstimate { value, n: 0, std_error: 0.0 }
    }

    /// Unbiased sample variance over `n` points; the SE uses the Gaussian
    /// result `Var(s²) = 2σ⁴/(n−1)`.
    pub fn from_sample(value: f64, n: usize) -> Self {
        let value = value.max(0.0);
        VarianceEstimate {
            value,
            n,
            std_error: value * (2.0 / (n as f64 - 1.0)).sqrt(),
        }
    }

    fn scaled(self, k: f64) -> Self {
        VarianceEstimate {
            value: self.value * k,
            n: self.n,
            std_error: self.std_error * k,
        }
    }
}

/// Centered second moments of two aligned streams.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairMoments {
    pub n: usize,
    /// Σ (a − ā)²
    pub saa: f64,
    /// Σ (b − b̄)²
    pub sbb: f64,
    /// Σ (a − ā)(b − b̄)
    pub sab: f64,
}

impl PairMoments {
    pub fn new(a: &[f64], b: &[f64]) -> Result<Self> {
        check_pair(a, b)?;
        let n = a.len() as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let (mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0);
        for (&x, &y) in a.iter().zip(b) {
            let (dx, dy) = (x - ma, y - mb);
            saa += dx * dx;
            sbb += dy * dy;
            sab += dx * dy;
        }
        Ok(PairMoments { n: a.len(), saa, sbb, sab })
    }

    /// Degrees of freedom of the within-stream variances.
    pub fn dof(&self) -> f64 {
        self.n as f64 - 1.0
    }

    /// Pool moments of independent blocks (each centered on its own mean).
    pub fn pool(&self, other: &PairMoments) -> PairMoments {
        PairMoments {
            n: self.n + other.n,
            saa: self.saa + other.saa,
            sbb: self.sbb + other.sbb,
            sab: self.sab + other.sab,
        }
    }

    /// Unbiased `Var(a + s·g·b)`.
    pub fn combined_variance(&self, g: f64, channel: Channel) -> f64 {
        let s = channel.sign();
        (self.saa + g * g * self.sbb + 2.0 * s * g * self.sab) / self.dof()
    }

    pub fn covariance(&self) -> f64 {
        self.sab / self.dof()
    }
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::invalid(
            "samples",
            format!("stream lengths differ ({} vs {})", a.len(), b.len()),
        ));
    }
    if a.len() < 2 {
        return Err(Error::invalid("samples", format!("need at least 2 samples, got {}", a.len())));
    }
    Ok(())
}

/// Unbiased sample variance of one stream.
pub fn sample_variance(a: &[f64]) -> Result<VarianceEstimate> {
    let m = PairMoments::new(a, a)?;
    Ok(VarianceEstimate::from_sample(m.saa / m.dof(), m.n))
}

/// `Var(a ± g·b) / (1 + g²)`: the combined photocurrent noise normalized to
/// the shot noise of two independent vacuum currents summed with gain `g`.
pub fn squeezing_variance(a: &[f64], b: &[f64], g: f64, channel: Channel) -> Result<VarianceEstimate> {
    Ok(conditional_variance(a, b, g, channel)?.scaled(1.0 / (1.0 + g * g)))
}

/// `Var(a ± g·b)` normalized to the shot noise of beam `a` alone (= 1): the
/// error of inferring `a` from `b`.
pub fn conditional_variance(a: &[f64], b: &[f64], g: f64, channel: Channel) -> Result<VarianceEstimate> {
    if !g.is_finite() {
        return Err(Error::invalid("gain", "must be finite"));
    }
    let m = PairMoments::new(a, b)?;
    Ok(VarianceEstimate::from_sample(m.combined_variance(g, channel), m.n))
}
