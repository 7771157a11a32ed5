use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack on the Heisenberg products, so that `v · (1/v)` rounding
/// below 1 is not rejected.
const HEISENBERG_SLACK: f64 = 1e-12;

/// The EPR source, given by the four normalized joint-quadrature variances.
///
/// `v_plus_x = V(δX₁+δX₂)/2`, `v_minus_x = V(δX₁−δX₂)/2` and likewise for the
/// phase quadratures. The protocol's correlation pattern (amplitude
/// anti-correlation, phase correlation) means `v_plus_x < 1` and
/// `v_minus_y < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSourceParams", into = "RawSourceParams")]
pub struct SourceParams {
    v_plus_x: f64,
    v_minus_x: f64,
    v_minus_y: f64,
    v_plus_y: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSourceParams {
    v_plus_x: f64,
    v_minus_x: f64,
    v_minus_y: f64,
    v_plus_y: f64,
}

impl TryFrom<RawSourceParams> for SourceParams {
    type Error = Error;

    fn try_from(raw: RawSourceParams) -> Result<Self> {
        SourceParams::new(raw.v_plus_x, raw.v_minus_x, raw.v_minus_y, raw.v_plus_y)
    }
}

impl From<SourceParams> for RawSourceParams {
    fn from(p: SourceParams) -> Self {
        RawSourceParams {
            v_plus_x: p.v_plus_x,
            v_minus_x: p.v_minus_x,
            v_minus_y: p.v_minus_y,
            v_plus_y: p.v_plus_y,
        }
    }
}

impl SourceParams {
    pub fn new(v_plus_x: f64, v_minus_x: f64, v_minus_y: f64, v_plus_y: f64) -> Result<Self> {
        for (field, v) in [
            ("v_plus_x", v_plus_x),
            ("v_minus_x", v_minus_x),
            ("v_minus_y", v_minus_y),
            ("v_plus_y", v_plus_y),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(field, format!("must be finite and > 0, got {v}")));
            }
        }
        if v_plus_x * v_plus_y < 1.0 - HEISENBERG_SLACK {
            return Err(Error::invalid(
                "v_plus_x",
                format!("v_plus_x * v_plus_y = {} violates the uncertainty bound 1", v_plus_x * v_plus_y),
            ));
        }
        if v_minus_x * v_minus_y < 1.0 - HEISENBERG_SLACK {
            return Err(Error::invalid(
                "v_minus_x",
                format!("v_minus_x * v_minus_y = {} violates the uncertainty bound 1", v_minus_x * v_minus_y),
            ));
        }
        Ok(SourceParams {
            v_plus_x,
            v_minus_x,
            v_minus_y,
            v_plus_y,
        })
    }

    /// Minimum-uncertainty two-mode squeezed state with squeezed-channel
    /// variance `v` and anti-squeezed partner `1/v`.
    pub fn pure(v: f64) -> Result<Self> {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::invalid("squeezing", format!("must be finite and > 0, got {v}")));
        }
        SourceParams::new(v, 1.0 / v, v, 1.0 / v)
    }

    /// Vacuum on both beams.
    pub fn vacuum() -> Self {
        SourceParams {
            v_plus_x: 1.0,
            v_minus_x: 1.0,
            v_minus_y: 1.0,
            v_plus_y: 1.0,
        }
    }

    pub fn v_plus_x(&self) -> f64 {
        self.v_plus_x
    }

    pub fn v_minus_x(&self) -> f64 {
        self.v_minus_x
    }

    pub fn v_minus_y(&self) -> f64 {
        self.v_minus_y
    }

    pub fn v_plus_y(&self) -> f64 {
        self.v_plus_y
    }

    /// `(squeezed, anti-squeezed)` channel variances for a matched
    /// measurement of the given basis.
    pub fn channel_pair(&self, basis: super::Basis) -> (f64, f64) {
        match basis {
            super::Basis::AQ => (self.v_plus_x, self.v_minus_x),
            super::Basis::PQ => (self.v_minus_y, self.v_plus_y),
        }
    }

    /// Single-beam variance of the given quadrature (same on both beams).
    pub fn beam_variance(&self, basis: super::Basis) -> f64 {
        let (a, b) = self.channel_pair(basis);
        0.5 * (a + b)
    }
}

/// Covariance of `(δX₁, δY₁, δX₂, δY₂)` in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix4(Matrix4<f64>);

impl CovarianceMatrix4 {
    pub const X1: usize = 0;
    pub const Y1: usize = 1;
    pub const X2: usize = 2;
    pub const Y2: usize = 3;

    /// Wrap an arbitrary matrix. Only symmetry and finiteness are checked;
    /// definiteness surfaces when the matrix is factorized for sampling.
    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("covariance", "entries must be finite"));
        }
        let scale = m.amax().max(1.0);
        if (m - m.transpose()).amax() > 1e-12 * scale {
            return Err(Error::invalid("covariance", "matrix is not symmetric"));
        }
        Ok(CovarianceMatrix4(m))
    }

    pub fn identity() -> Self {
        CovarianceMatrix4(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
}

/// Covariance matrix realizing the source's sum/difference mode variances.
///
/// With `δX₁ = (s+d)/√2`, `δX₂ = (s−d)/√2`, `Var(s) = v_plus_x` and
/// `Var(d) = v_minus_x`, each beam has `Var(δX) = (v₊+v₋)/2` and
/// `Cov(δX₁,δX₂) = (v₊−v₋)/2`. Amplitude and phase blocks are uncorrelated.
pub fn build_covariance(params: &SourceParams) -> CovarianceMatrix4 {
    use CovarianceMatrix4 as C;
    let mut m = Matrix4::zeros();
    let vx = 0.5 * (params.v_plus_x + params.v_minus_x);
    let cx = 0.5 * (params.v_plus_x - params.v_minus_x);
    let vy = 0.5 * (params.v_plus_y + params.v_minus_y);
    let cy = 0.5 * (params.v_plus_y - params.v_minus_y);
    m[(C::X1, C::X1)] = vx;
    m[(C::X2, C::X2)] = vx;
    m[(C::X1, C::X2)] = cx;
    m[(C::X2, C::X1)] = cx;
    m[(C::Y1, C::Y1)] = vy;
    m[(C::Y2, C::Y2)] = vy;
    m[(C::Y1, C::Y2)] = cy;
    m[(C::Y2, C::Y1)] = cy;
    CovarianceMatrix4(m)
}
