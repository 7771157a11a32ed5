//! Sub-seed derivation.
//!
//! Every stochastic consumer draws from its own ChaCha8 stream seeded with
//! `derive_seed(root, tag, index)`. The derivation hashes the tag with 64-bit
//! FNV-1a, folds in the root seed and the index, and finishes each fold with
//! the SplitMix64 mixer. Streams for different `(tag, index)` pairs are
//! therefore independent of each other and of evaluation order, which is what
//! lets slots be simulated in any order while staying reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes()
        .fold(FNV_OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// Derive the seed for stream `(tag, index)` under `root`.
pub fn derive_seed(root: u64, tag: &str, index: u64) -> u64 {
    let h = splitmix64(root ^ fnv1a(tag));
    splitmix64(h ^ splitmix64(index))
}

/// RNG for stream `(tag, index)` under `root`.
pub fn stream(root: u64, tag: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, tag, index))
}

/// Well-known stream tags.
pub mod tags {
    pub const ALICE_BASIS: &str = "alice-basis";
    pub const BOB_BASIS: &str = "bob-basis";
    pub const SOURCE: &str = "source";
    pub const CHANNEL: &str = "channel";
    pub const EVE_BASIS: &str = "eve-basis";
    pub const EVE_GUESS: &str = "eve-guess";
    pub const REPETITION: &str = "repetition";
    pub const SWEEP: &str = "sweep";
}
