use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::discriminator::Guess;
use super::tap::EveRecord;
use crate::protocol::SessionResult;

/// How much Eve learned in a session.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveScore {
    /// Fraction of slots where Eve's match/mismatch verdict was right.
    pub discrimination_accuracy: f64,
    /// Announced slots where Eve guessed `Match` in the true basis.
    pub key_bits_known: usize,
    pub key_fraction_known: f64,
    pub slots_scored: usize,
}

pub fn eve_score(session: &SessionResult, records: &[EveRecord]) -> EveScore {
    let alice_basis = |slot: usize| session.slots.get(slot).map(|s| s.alice_basis);

    let mut correct = 0usize;
    let mut scored = 0usize;
    for r in records {
        let Some(truth) = alice_basis(r.slot_index) else { continue };
        let matched = r.eve_basis == truth;
        scored += 1;
        if matched == (r.guess == Guess::Match) {
            correct += 1;
        }
    }

    let by_slot: HashMap<usize, &EveRecord> = records.iter().map(|r| (r.slot_index, r)).collect();
    let key_bits_known = session
        .alice_key
        .slot_indices
        .iter()
        .filter(|&&k| {
            by_slot
                .get(&k)
                .is_some_and(|r| r.guess == Guess::Match && Some(r.eve_basis) == alice_basis(k))
        })
        .count();
    let key_len = session.alice_key.len();

    EveScore {
        discrimination_accuracy: if scored == 0 { 0.5 } else { correct as f64 / scored as f64 },
        key_bits_known,
        key_fraction_known: if key_len == 0 { 0.0 } else { key_bits_known as f64 / key_len as f64 },
        slots_scored: scored,
    }
}
