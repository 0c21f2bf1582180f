//! Packed GF(2) vectors.
//!
//! Bit `i` lives in word `i / 64` at bit position `i % 64`. Bits past the
//! logical length are always zero so that word-level equality and popcounts
//! stay exact.

use std::fmt;
use std::str::FromStr;

use crate::error::{PacError, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length bit vector stored in 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitWord {
    words: Vec<u64>,
    len: usize,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self {
            words: vec![u64::MAX; words_for(len)],
            len,
        };
        w.clear_tail();
        w
    }

    /// Builds a word from 0/1 values; any nonzero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                w.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        w
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                w.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        w
    }

    /// Takes the low `len` bits of `value`, bit 0 first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS);
        let mut w = Self::zeros(len);
        if len > 0 {
            w.words[0] = value;
            w.clear_tail();
        }
        w
    }

    pub fn from_words(words: Vec<u64>, len: usize) -> Self {
        assert_eq!(words.len(), words_for(len));
        let mut w = Self { words, len };
        w.clear_tail();
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        ((self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: u8) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit & 1 == 1 {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitWord) {
        assert_eq!(self.len, other.len, "xor of words with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitWord) -> BitWord {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitWord) -> BitWord {
        assert_eq!(self.len, other.len, "and of words with different lengths");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        BitWord {
            words,
            len: self.len,
        }
    }

    pub fn not(&self) -> BitWord {
        let mut out = BitWord {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.clear_tail();
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn parity(&self) -> u8 {
        (self.words.iter().fold(0u64, |acc, w| acc ^ w).count_ones() & 1) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().collect()
    }

    /// Copy of bits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitWord {
        assert!(start + len <= self.len);
        let mut out = BitWord::zeros(len);
        for i in 0..len {
            if self.get(start + i) == 1 {
                out.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        out
    }

    pub fn concat(&self, other: &BitWord) -> BitWord {
        let mut out = BitWord::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in 0..other.len {
            if other.get(i) == 1 {
                out.set(self.len + i, 1);
            }
        }
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitWord) -> u8 {
        assert_eq!(self.len, other.len);
        let acc = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        (acc.count_ones() & 1) as u8
    }

    /// Bits as a big-endian-by-position hex string: bit 0 is the MSB of the
    /// first nibble. Length is not encoded.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.len.div_ceil(4));
        for chunk in 0..self.len.div_ceil(4) {
            let mut nib = 0u8;
            for j in 0..4 {
                let i = chunk * 4 + j;
                nib <<= 1;
                if i < self.len {
                    nib |= self.get(i);
                }
            }
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        s
    }

    /// Inverse of [`BitWord::to_hex`]; `len` trims the final nibble.
    pub fn from_hex(s: &str, len: usize) -> Result<BitWord> {
        let s = s.trim().trim_start_matches("0x");
        if s.len() != len.div_ceil(4) {
            return Err(PacError::LengthMismatch {
                what: "hex digits",
                expected: len.div_ceil(4),
                actual: s.len(),
            });
        }
        let mut out = BitWord::zeros(len);
        for (chunk, c) in s.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| PacError::InvalidInput(format!("bad hex digit {c:?}")))?;
            for j in 0..4 {
                let i = chunk * 4 + j;
                let bit = ((nib >> (3 - j)) & 1) as u8;
                if i < len {
                    out.set(i, bit);
                } else if bit == 1 {
                    return Err(PacError::InvalidInput(
                        "hex string has bits set past the word length".into(),
                    ));
                }
            }
        }
        Ok(out)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl FromStr for BitWord {
    type Err = PacError;

    /// Parses a string of `0`/`1` characters, bit 0 first. Underscores and
    /// whitespace are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                '_' | ' ' | '\t' | '\n' | '\r' => {}
                other => {
                    return Err(PacError::InvalidInput(format!(
                        "bit string contains {other:?}"
                    )))
                }
            }
        }
        Ok(BitWord::from_bits(&bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bits_stay_clear() {
        let w = BitWord::ones(70);
        assert_eq!(w.count_ones(), 70);
        assert_eq!(w.not().count_ones(), 0);
        assert_eq!(BitWord::from_u64(u64::MAX, 3).count_ones(), 3);
    }

    #[test]
    fn parse_and_display() {
        let w: BitWord = "1011_0110".parse().unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!(w.to_string(), "10110110");
        assert!("10a1".parse::<BitWord>().is_err());
    }

    #[test]
    fn hex_roundtrip_with_partial_nibble() {
        let w: BitWord = "1011001".parse().unwrap();
        assert_eq!(w.to_hex(), "b2");
        assert_eq!(BitWord::from_hex("b2", 7).unwrap(), w);
        assert!(BitWord::from_hex("b3", 7).is_err());
        assert!(BitWord::from_hex("b", 7).is_err());
    }

    #[test]
    fn slice_concat_across_word_boundary() {
        let bits: Vec<u8> = (0..150).map(|i| ((i * 7 + 3) % 5 == 0) as u8).collect();
        let w = BitWord::from_bits(&bits);
        let a = w.slice(0, 61);
        let b = w.slice(61, 89);
        assert_eq!(a.concat(&b), w);
        assert_eq!(b.to_bits(), bits[61..].to_vec());
    }

    #[test]
    fn dot_and_parity() {
        let a: BitWord = "1101".parse().unwrap();
        let b: BitWord = "1011".parse().unwrap();
        assert_eq!(a.dot(&b), 0);
        assert_eq!(a.parity(), 1);
        assert_eq!(a.xor(&b).to_string(), "0110");
    }
}
