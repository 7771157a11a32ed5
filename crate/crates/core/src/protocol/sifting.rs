use serde::{Deserialize, Serialize};

use crate::gaussian::Basis;

/// One party's key: its own basis choice at every announced slot,
/// AQ → 1 and PQ → 0.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SiftedKey {
    pub bits: Vec<u8>,
    pub slot_indices: Vec<usize>,
}

impl SiftedKey {
    /// Build from a party's basis record and Bob's announcement.
    pub fn assemble(own_bases: &[Basis], announced: &[usize]) -> Self {
        SiftedKey {
            bits: announced.iter().map(|&k| own_bases[k].bit()).collect(),
            slot_indices: announced.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones_fraction(&self) -> f64 {
        if self.bits.is_empty() {
            return 0.0;
        }
        self.bits.iter().filter(|&&b| b == 1).count() as f64 / self.bits.len() as f64
    }

    /// Bits packed MSB-first; the last byte is zero-padded.
    pub fn packed(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)))
            })
            .collect()
    }

    pub fn export(&self) -> KeyExport {
        KeyExport {
            bit_length: self.bits.len(),
            hex: hex::encode(self.packed()),
            slot_indices: self.slot_indices.clone(),
        }
    }
}

/// Serialized form of a key: hex bit string plus the slot indices it came
/// from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyExport {
    pub bit_length: usize,
    pub hex: String,
    pub slot_indices: Vec<usize>,
}

impl KeyExport {
    pub fn to_key(&self) -> Option<SiftedKey> {
        let bytes = hex::decode(&self.hex).ok()?;
        if bytes.len() != self.bit_length.div_ceil(8) || self.slot_indices.len() != self.bit_length {
            return None;
        }
        let bits = (0..self.bit_length).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1).collect();
        Some(SiftedKey {
            bits,
            slot_indices: self.slot_indices.clone(),
        })
    }
}
