//! Gaussian source model and the closed-form variance, gain and criteria
//! formulas of the bright-beam protocol.
//!
//! Only the quantum fluctuations `δX_j`, `δY_j` around the bright mean fields
//! are simulated. The two-mode state is Gaussian with a non-negative Wigner
//! function, so drawing all four fluctuations jointly and revealing only the
//! quadrature a party measured reproduces the measurement statistics exactly.

mod beamsplitter;
mod criteria;
mod estimators;
mod formulas;
mod sampling;
mod source;

pub use beamsplitter::{apply_beamsplitter, BeamSplitter, ModeSample};
pub use criteria::{entanglement_checks, CriteriaReport};
pub use estimators::{conditional_variance, sample_variance, squeezing_variance, Channel, PairMoments, VarianceEstimate};
pub use formulas::{
    conditional_variance_minimum, eve_delta_covariance_form, eve_delta_printed_form, optimal_gain,
    predicted_bob_sum_variance,
};
pub use sampling::{sample_phase_space, PhaseSpaceSample, PhaseSpaceSampler};
pub use source::{build_covariance, CovarianceMatrix4, SourceParams};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Which quadrature a party measures in a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    /// Amplitude quadrature; key bit 1.
    AQ,
    /// Phase quadrature; key bit 0.
    PQ,
}

impl Basis {
    pub fn bit(self) -> u8 {
        match self {
            Basis::AQ => 1,
            Basis::PQ => 0,
        }
    }

    pub fn other(self) -> Basis {
        match self {
            Basis::AQ => Basis::PQ,
            Basis::PQ => Basis::AQ,
        }
    }

    /// The channel that is squeezed when both parties measure this quadrature:
    /// amplitudes are anti-correlated (sum), phases correlated (difference).
    pub fn correlation_channel(self) -> Channel {
        match self {
            Basis::AQ => Channel::Plus,
            Basis::PQ => Channel::Minus,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::AQ => "AQ",
            Basis::PQ => "PQ",
        })
    }
}
