use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::Basis;

/// `k` independent uniform AQ/PQ choices from `seed`.
pub fn choose_bases(k: usize, seed: u64) -> Vec<Basis> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| if rng.random_bool(0.5) { Basis::AQ } else { Basis::PQ })
        .collect()
}
