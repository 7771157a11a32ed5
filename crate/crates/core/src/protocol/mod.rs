//! A full key-distribution session between Alice and Bob.
//!
//! Per time slot both parties independently pick a quadrature, Alice
//! broadcasts her photocurrent on classical channel I, and Bob computes the
//! unit-gain sum (amplitude) or difference (phase) variance against his own
//! current. Slots where that variance drops below the threshold are
//! announced on classical channel II by index only. Each party then writes
//! its *own* basis choice for the announced slots as the key bit.

mod bases;
mod channels;
mod config;
mod monitor;
mod session;
mod sifting;
mod threshold;
mod transcript;

pub use bases::choose_bases;
pub use channels::{scan_for_basis_labels, scan_wire_lines, ChannelIIMessage, ChannelIMessage, ClassicalLog};
pub use config::{SessionConfig, ThresholdPolicy};
pub use monitor::{
    monitor_session, Alarm, MonitorReference, MonitorReport, PerBasis, EXCESS_NOISE_SIGMAS, GAIN_DRIFT_SIGMAS,
    MISMATCH_SIGNIFICANCE,
};
pub use session::{
    bob_correlation_test, calibration_basis, correlation_variance, effective_bit_rate, run_session, SessionResult,
    SlotOutcome, SlotRole,
};
pub use sifting::{KeyExport, SiftedKey};
pub use threshold::{calibrated_threshold, compute_threshold, midpoint_threshold};
pub use transcript::{write_eve_transcript, write_session_transcript, TRANSCRIPT_SCHEMA};
