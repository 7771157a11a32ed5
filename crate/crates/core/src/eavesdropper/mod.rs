//! Eve's beam-splitter tap on the quantum channel and her plus/minus-channel
//! discriminator against Alice's public photocurrents.
//!
//! Eve splits off a fraction `1−η` of beam 2 for the first `⌈f·M⌉` samples of
//! each slot, measures one quadrature of what she tapped, and correlates it
//! with the photocurrent Alice broadcasts on classical channel I. A large
//! plus/minus difference means she and Alice measured the same quadrature.

mod discriminator;
mod score;
mod tap;

pub use discriminator::{delta_discriminator, Guess};
pub use score::{eve_score, EveScore};
pub use tap::{eve_intercept, EveRecord, Interception, TapConfig};
