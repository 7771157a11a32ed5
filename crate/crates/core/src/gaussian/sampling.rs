use nalgebra::Matrix4;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::source::CovarianceMatrix4;
use crate::error::{Error, Result};
use crate::seed;

/// One joint draw of the four quadrature fluctuations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseSpaceSample {
    pub dx1: f64,
    pub dy1: f64,
    pub dx2: f64,
    pub dy2: f64,
}

/// Draws zero-mean Gaussian samples with a fixed covariance through a
/// factor `F` with `F Fᵀ = Σ`.
#[derive(Debug, Clone)]
pub struct PhaseSpaceSampler {
    factor: [[f64; 4]; 4],
}

impl PhaseSpaceSampler {
    /// Cholesky factor for positive-definite matrices; semidefinite matrices
    /// fall back to `V·sqrt(Λ)` from the symmetric eigendecomposition.
    pub fn new(cov: &CovarianceMatrix4) -> Result<Self> {
        let m = *cov.matrix();
        let factor: Matrix4<f64> = match m.cholesky() {
            Some(ch) => ch.l(),
            None => {
                let eig = m.symmetric_eigen();
                let floor = -1e-12 * m.amax().max(1.0);
                if eig.eigenvalues.iter().any(|&l| l < floor) {
                    return Err(Error::NotPositiveDefinite);
                }
                let sqrt_l = Matrix4::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
                eig.eigenvectors * sqrt_l
            }
        };
        let mut f = [[0.0; 4]; 4];
        for (i, row) in f.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = factor[(i, j)];
            }
        }
        Ok(PhaseSpaceSampler { factor: f })
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PhaseSpaceSample {
        let z: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let row = |i: usize| {
            let r = &self.factor[i];
            r[0] * z[0] + r[1] * z[1] + r[2] * z[2] + r[3] * z[3]
        };
        PhaseSpaceSample {
            dx1: row(0),
            dy1: row(1),
            dx2: row(2),
            dy2: row(3),
        }
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<PhaseSpaceSample> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

/// `n` i.i.d. draws from `N(0, cov)`, reproducible for a fixed `seed`.
pub fn sample_phase_space(cov: &CovarianceMatrix4, n: usize, seed: u64) -> Result<Vec<PhaseSpaceSample>> {
    let sampler = PhaseSpaceSampler::new(cov)?;
    let mut rng = seed::stream(seed, seed::tags::SOURCE, 0);
    Ok(sampler.sample_n(&mut rng, n))
}
