//! Fixed-width bit vectors over Z2.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{BitAnd, BitOrAssign, BitXor, BitXorAssign};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A vector in Z2^width, packed 64 bits per word.
///
/// Addition in Z2^n is XOR, so [`BitXor`] doubles as vector addition. Unused
/// high bits of the last word are always zero, which keeps derived equality
/// and hashing sound.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVec {
    width: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(width: usize) -> Self {
        BitVec {
            width,
            words: alloc::vec![0; width.div_ceil(WORD)],
        }
    }

    pub fn ones(width: usize) -> Self {
        let mut v = BitVec {
            width,
            words: alloc::vec![!0; width.div_ceil(WORD)],
        };
        v.clear_tail();
        v
    }

    /// Builds a vector from 0/1 entries. Any nonzero entry counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    /// The `width` low bits of `value`, most significant bit first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        (0..width)
            .map(|i| {
                let shift = width - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect()
    }

    /// Reads the vector as a big-endian unsigned integer.
    ///
    /// Returns `None` when the width exceeds 64 bits.
    pub fn to_uint(&self) -> Option<u64> {
        if self.width > 64 {
            return None;
        }
        Some(self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64))
    }

    /// The basis vector with a single 1 at zero-based position `i`.
    pub fn unit(width: usize, i: usize) -> Self {
        let mut v = BitVec::zeros(width);
        v.set(i, true);
        v
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions where both `self` and `other` are 1.
    pub fn and_count(&self, other: &BitVec) -> usize {
        assert_eq!(self.width, other.width);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Positions of the 1 bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&i| self.get(i))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.get(i))
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.append(other);
        out
    }

    /// Appends the bits of `other`.
    pub fn append(&mut self, other: &BitVec) {
        let shift = self.width % WORD;
        self.width += other.width;
        if shift == 0 {
            self.words.extend_from_slice(&other.words);
        } else {
            for &w in &other.words {
                *self.words.last_mut().expect("shift > 0 implies a partial word") |= w << shift;
                self.words.push(w >> (WORD - shift));
            }
        }
        self.words.truncate(self.width.div_ceil(WORD));
    }

    /// Bits `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        assert!(start <= end && end <= self.width);
        let width = end - start;
        let (base, shift) = (start / WORD, start % WORD);
        let words = (0..width.div_ceil(WORD))
            .map(|k| {
                let lo = self.words[base + k] >> shift;
                let hi = match (shift, self.words.get(base + k + 1)) {
                    (0, _) | (_, None) => 0,
                    (_, Some(h)) => h << (WORD - shift),
                };
                lo | hi
            })
            .collect();
        let mut out = BitVec { width, words };
        out.clear_tail();
        out
    }

    pub fn push(&mut self, bit: bool) {
        if self.width.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.width += 1;
        self.set(self.width - 1, bit);
    }

    pub fn check_width(&self, expected: usize) -> Result<()> {
        if self.width == expected {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                expected,
                found: self.width,
            })
        }
    }

    /// Lowercase hex of the bits, four per digit, most significant first.
    /// The last digit is padded with trailing zero bits.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.width.div_ceil(4));
        for chunk in (0..self.width).step_by(4) {
            let mut nibble = 0u32;
            for k in 0..4 {
                nibble <<= 1;
                if chunk + k < self.width && self.get(chunk + k) {
                    nibble |= 1;
                }
            }
            s.push(char::from_digit(nibble, 16).unwrap());
        }
        s
    }

    /// Inverse of [`BitVec::to_hex`] for a known width.
    pub fn from_hex(hex: &str, width: usize) -> Result<BitVec> {
        if hex.len() != width.div_ceil(4) {
            return Err(Error::WidthMismatch {
                expected: width.div_ceil(4),
                found: hex.len(),
            });
        }
        let mut out = BitVec::zeros(width);
        for (d, c) in hex.chars().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidArgument(alloc::format!("not a hex digit: {c:?}")))?;
            for k in 0..4 {
                let i = d * 4 + k;
                if nibble & (8 >> k) != 0 {
                    if i >= width {
                        return Err(Error::InvalidArgument("nonzero padding bits".into()));
                    }
                    out.set(i, true);
                }
            }
        }
        Ok(out)
    }

    fn clear_tail(&mut self) {
        let rem = self.width % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut v = BitVec::zeros(0);
        v.extend(iter);
        v
    }
}

impl Extend<bool> for BitVec {
    fn extend<I: IntoIterator<Item = bool>>(&mut self, iter: I) {
        for b in iter {
            self.push(b);
        }
    }
}

impl BitXorAssign<&BitVec> for BitVec {
    fn bitxor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.width, rhs.width, "xor of vectors of different widths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitOrAssign<&BitVec> for BitVec {
    fn bitor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.width, rhs.width, "or of vectors of different widths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a |= b;
        }
    }
}

impl BitXor for &BitVec {
    type Output = BitVec;
    fn bitxor(self, rhs: &BitVec) -> BitVec {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitAnd for &BitVec {
    type Output = BitVec;
    fn bitand(self, rhs: &BitVec) -> BitVec {
        assert_eq!(self.width, rhs.width, "and of vectors of different widths");
        BitVec {
            width: self.width,
            words: self.words.iter().zip(&rhs.words).map(|(a, b)| a & b).collect(),
        }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{self}]")
    }
}
