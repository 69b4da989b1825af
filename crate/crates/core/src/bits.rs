//! Finite binary words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::{pow2_neg, Dyadic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit string {0:?}: expected ASCII 0/1 or \"-\" for the empty word")]
pub struct ParseBitsError(pub String);

/// A finite word over `{0, 1}`.
///
/// `Ord` is the canonical length-then-lexicographic order, so `ε` is the
/// least string. The empty word is written `-` in text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn empty() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// `0^n`.
    pub fn zeros(n: usize) -> Self {
        BitString { bits: vec![false; n] }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn with(&self, bit: bool) -> Self {
        let mut out = self.clone();
        out.push(bit);
        out
    }

    pub fn concat(&self, other: &BitString) -> Self {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    /// First `n` bits (the whole word when `n` exceeds its length).
    pub fn prefix(&self, n: usize) -> BitString {
        BitString { bits: self.bits[..n.min(self.len())].to_vec() }
    }

    /// `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// One of the two words is a prefix of the other.
    pub fn is_comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Measure of the cylinder `[self]`, i.e. `2^-|self|`.
    pub fn cylinder_measure(&self) -> Dyadic {
        pow2_neg(self.len())
    }

    /// The binary fraction `0.self = Σ bⱼ 2^-j`; the empty word gives 0.
    pub fn binary_fraction(&self) -> Dyadic {
        let mut mantissa = BigUint::default();
        for &b in &self.bits {
            mantissa <<= 1;
            if b {
                mantissa += 1u32;
            }
        }
        Dyadic::new(mantissa, self.len())
    }

    /// Next word in canonical order.
    pub fn successor(&self) -> BitString {
        let mut bits = self.bits.clone();
        // Binary increment; overflow (all ones) moves to 0^(n+1).
        for b in bits.iter_mut().rev() {
            if *b {
                *b = false;
            } else {
                *b = true;
                return BitString { bits };
            }
        }
        BitString::zeros(self.len() + 1)
    }

    /// Canonical enumeration `ε, 0, 1, 00, 01, …`.
    pub fn canonical_iter() -> impl Iterator<Item = BitString> {
        std::iter::successors(Some(BitString::empty()), |s| Some(s.successor()))
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("-");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" || s == "ε" {
            return Ok(BitString::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ParseBitsError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

/// Whether no word of `strings` is a prefix of another (duplicates count as
/// comparable).
///
/// Sorting lexicographically places every word directly before the words it
/// prefixes, so checking neighbours suffices.
pub fn is_prefix_free<'a, I>(strings: I) -> bool
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut sorted: Vec<&[bool]> = strings.into_iter().map(|s| s.bits()).collect();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| !w[1].starts_with(w[0]))
}

/// Cylinder measure `Σ 2^-|s|` of a set of words, without pruning.
pub fn measure_of<'a, I>(strings: I) -> Dyadic
where
    I: IntoIterator<Item = &'a BitString>,
{
    Dyadic::sum_pow2_neg(strings.into_iter().map(BitString::len))
}
