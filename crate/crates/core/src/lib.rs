//! Simulator for quantum key distribution with bright EPR-entangled beams.
//!
//! The key bit of each time slot is the *type* of measurement a party chose
//! (amplitude quadrature = 1, phase quadrature = 0). Alice and Bob measure
//! independently; Bob keeps the slots in which the sum or difference
//! photocurrent drops below shot noise, which only happens when both parties
//! measured the same quadrature.
//!
//! The crate is split into:
//!
//! * [`gaussian`]: the two-mode Gaussian source, phase-space sampling, the
//!   tapping beam splitter, variance estimators and the closed-form
//!   variance/gain/criteria formulas.
//! * [`protocol`]: slot-synchronised sessions between Alice and Bob, the two
//!   classical channels, sifting and security monitoring.
//! * [`eavesdropper`]: Eve's beam-splitter tap, her plus/minus-channel
//!   discriminator and scoring of what she learned.
//!
//! All variances are in shot-noise units (vacuum quadrature variance = 1).

pub mod eavesdropper;
pub mod error;
pub mod gaussian;
pub mod protocol;
pub mod seed;

pub use error::{Error, Result};
pub use gaussian::{Basis, CovarianceMatrix4, CriteriaReport, PhaseSpaceSample, SourceParams, VarianceEstimate};
