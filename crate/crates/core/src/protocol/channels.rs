//! The two public classical channels and their line-oriented wire format.
//!
//! ```text
//! I <slot_index> <sample> <sample> ...
//! II <slot_index>,<slot_index>,...
//! ```
//!
//! Neither message type carries a basis: channel I is Alice's bare
//! photocurrent, channel II lists kept slot indices.

use std::sync::Arc;

/// Alice's photocurrent for one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelIMessage {
    pub slot_index: usize,
    pub current: Arc<[f64]>,
}

/// Bob's announcement of the slots in which he saw correlations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelIIMessage {
    pub announced: Vec<usize>,
}

impl ChannelIMessage {
    pub fn to_wire(&self) -> String {
        let mut s = format!("I {}", self.slot_index);
        for v in self.current.iter() {
            s.push(' ');
            s.push_str(&v.to_string());
        }
        s
    }
}

impl ChannelIIMessage {
    pub fn to_wire(&self) -> String {
        let list: Vec<String> = self.announced.iter().map(usize::to_string).collect();
        format!("II {}", list.join(","))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassicalLog {
    pub channel_i: Vec<ChannelIMessage>,
    pub channel_ii: Vec<ChannelIIMessage>,
}

impl ClassicalLog {
    pub fn wire_lines(&self) -> impl Iterator<Item = String> + '_ {
        self.channel_i
            .iter()
            .map(ChannelIMessage::to_wire)
            .chain(self.channel_ii.iter().map(ChannelIIMessage::to_wire))
    }
}

const BASIS_TOKENS: [&str; 4] = ["AQ", "PQ", "amplitude", "phase"];

/// Lines of the wire transcript that mention a basis label. Empty for a
/// conforming log.
pub fn scan_for_basis_labels(log: &ClassicalLog) -> Vec<String> {
    scan_wire_lines(log.wire_lines())
}

/// Same scan over arbitrary wire lines, e.g. a transcript read back from disk.
pub fn scan_wire_lines<I: IntoIterator<Item = String>>(lines: I) -> Vec<String> {
    lines
        .into_iter()
        .filter(|line| {
            let lower = line.to_ascii_lowercase();
            BASIS_TOKENS.iter().any(|t| lower.contains(&t.to_ascii_lowercase()))
        })
        .collect()
}
