//! Packed bit vectors.
//!
//! Bit `i` of a [`BitVector`] is variable/qubit/wire `i`. When a vector is
//! identified with an integer index, bit `i` maps to the `1 << i` place, and
//! the string form lists bits in ascending index order (so `"110"` has
//! bit 0 = 1, bit 1 = 1, bit 2 = 0).

use std::fmt;
use std::str::FromStr;

use rand::RngCore;

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Builds a vector of `len <= 64` bits from an integer index.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= 64, "index form only covers up to 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = index & mask_low(len);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Uniformly random vector; consumes one `u64` of entropy per word.
    pub fn random(len: usize, rng: &mut impl RngCore) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.next_u64();
        }
        v.mask_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let (w, b) = (i / 64, i % 64);
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// XOR of two vectors of equal length.
    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                got: other.len,
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitVector {
            len: self.len,
            words,
        })
    }

    /// Integer form, available for vectors of at most 64 bits.
    pub fn to_index(&self) -> Option<u64> {
        if self.len <= 64 {
            Some(self.words.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn mask_tail(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= mask_low(tail);
            }
        }
    }
}

fn mask_low(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Extracts `len <= 64` bits starting at `start` from a packed word slice;
/// bits past the end read as zero.
pub fn extract_word(words: &[u64], start: usize, len: usize) -> u64 {
    debug_assert!(len <= 64);
    if len == 0 {
        return 0;
    }
    let w = start / 64;
    let off = start % 64;
    let mut v = words.get(w).copied().unwrap_or(0) >> off;
    if off != 0 {
        if let Some(&hi) = words.get(w + 1) {
            v |= hi << (64 - off);
        }
    }
    if len < 64 {
        v &= (1u64 << len) - 1;
    }
    v
}

/// Parity of `a & b` over packed words of equal layout.
pub fn parity_and(a: &[u64], b: &[u64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc ^= x & y;
    }
    acc.count_ones() & 1 == 1
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse(format!(
                        "bit string may contain only 0 and 1, found {c:?}"
                    )))
                }
            }
        }
        Ok(BitVector::from_bits(&bits))
    }
}
