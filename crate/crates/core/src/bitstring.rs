//! Fixed-length packed bitstrings.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// A fixed-length binary genotype stored in packed 64-bit words.
///
/// Bits beyond `len` in the last word are kept at zero so that equality,
/// hashing and popcount never see garbage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitstring {
    words: Vec<u64>,
    len: usize,
}

impl Bitstring {
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyBitstring);
        }
        Ok(Self {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        })
    }

    pub fn ones(len: usize) -> Result<Self> {
        let mut x = Self::zeros(len)?;
        x.words.iter_mut().for_each(|w| *w = u64::MAX);
        x.clear_tail();
        Ok(x)
    }

    /// Builds a bitstring from booleans, position 0 first.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut x = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                x.set(i, true);
            }
        }
        Ok(x)
    }

    /// Parses a string of `0`/`1` characters, leftmost character is position 0.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::param("bitstring", format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }

    /// Each bit independently 1 with probability 1/2.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<Self> {
        let mut x = Self::zeros(len)?;
        for w in x.words.iter_mut() {
            *w = rng.next_u64();
        }
        x.clear_tail();
        Ok(x)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; present for API symmetry with collections.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Number of 1-bits.
    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Length of the maximal all-ones prefix.
    pub fn leading_ones(&self) -> usize {
        let mut total = 0;
        for (k, w) in self.words.iter().enumerate() {
            let run = w.trailing_ones() as usize;
            if run < WORD_BITS {
                return (total + run).min(self.len);
            }
            total = (k + 1) * WORD_BITS;
        }
        total.min(self.len)
    }

    /// Flips every bit in place.
    pub fn complement_in_place(&mut self) {
        self.words.iter_mut().for_each(|w| *w = !*w);
        self.clear_tail();
    }

    pub fn complement(&self) -> Self {
        let mut c = self.clone();
        c.complement_in_place();
        c
    }

    /// Overwrites `self` with `other` without reallocating.
    #[inline]
    pub fn copy_from(&mut self, other: &Bitstring) {
        debug_assert_eq!(self.len, other.len);
        self.words.copy_from_slice(&other.words);
    }

    /// Sets `self` to the complement of `other` without reallocating.
    #[inline]
    pub(crate) fn copy_complement_from(&mut self, other: &Bitstring) {
        debug_assert_eq!(self.len, other.len);
        for (dst, src) in self.words.iter_mut().zip(&other.words) {
            *dst = !*src;
        }
        self.clear_tail();
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.iter().collect()
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

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

/// Uniformly random bitstring of length `n`.
pub fn random_bitstring<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Bitstring> {
    Bitstring::random(n, rng)
}

/// Number of positions where `x` and `y` differ.
pub fn hamming_distance(x: &Bitstring, y: &Bitstring) -> Result<usize> {
    if x.len != y.len {
        return Err(Error::LengthMismatch {
            left: x.len,
            right: y.len,
        });
    }
    Ok(x
        .words
        .iter()
        .zip(&y.words)
        .map(|(a, b)| (a ^ b).count_ones() as usize)
        .sum())
}
