//! Computably enumerable reals given by increasing rational approximations,
//! and their conversion to dyadic request streams and machine domains.
//!
//! Only finite prefixes are ever handled. The limit itself is never
//! materialized; every contract here is a statement about the first `k`
//! terms.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{ceil_neg_log2, pow2_neg, Dyadic, Rational};
use crate::bits::BitString;
use crate::codespace::{allocate_all, AllocError, Request};
use crate::machines::MachineTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CeRealError {
    #[error("term {index} ({value}) is not in the open interval (0, 1)")]
    OutOfRange { index: usize, value: Rational },
    #[error("term {index} ({value}) does not exceed its predecessor")]
    NotIncreasing { index: usize, value: Rational },
    #[error("requested {requested} terms but only {available} are available")]
    PrefixTooShort { requested: usize, available: usize },
    #[error("decomposition invariant failed at term {0}")]
    Sandwich(usize),
    #[error(transparent)]
    Alloc(#[from] AllocError),
}

/// Strictly increasing prefix `a₁ < a₂ < …` of rationals in `(0, 1)`.
///
/// The prefix grows on demand through [`RationalSeq::push`] or
/// [`RationalSeq::extend_from`]; each new term is validated on arrival.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalSeq {
    terms: Vec<Rational>,
}

impl RationalSeq {
    pub fn new(terms: Vec<Rational>) -> Result<Self, CeRealError> {
        let mut seq = RationalSeq::default();
        for q in terms {
            seq.push(q)?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, q: Rational) -> Result<(), CeRealError> {
        let index = self.terms.len();
        if !(q > Rational::zero() && q < Rational::one()) {
            return Err(CeRealError::OutOfRange { index, value: q });
        }
        if self.terms.last().is_some_and(|last| q <= *last) {
            return Err(CeRealError::NotIncreasing { index, value: q });
        }
        self.terms.push(q);
        Ok(())
    }

    /// Pulls `count` more terms from `generator`, which receives the 0-based
    /// index of the term to produce.
    pub fn extend_from<F>(&mut self, count: usize, mut generator: F) -> Result<(), CeRealError>
    where
        F: FnMut(usize) -> Rational,
    {
        for _ in 0..count {
            let i = self.terms.len();
            self.push(generator(i))?;
        }
        Ok(())
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `a_i` with the convention `a_0 = 0` (terms are 1-based).
    pub fn term(&self, i: usize) -> Rational {
        if i == 0 {
            Rational::zero()
        } else {
            self.terms[i - 1].clone()
        }
    }

    fn require(&self, k: usize) -> Result<(), CeRealError> {
        if k > self.terms.len() {
            return Err(CeRealError::PrefixTooShort { requested: k, available: self.terms.len() });
        }
        Ok(())
    }
}

/// Lengths `nᵢ` and partial sums `rᵢ = rᵢ₋₁ + 2^-nᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DyadicDecomposition {
    pub lengths: Vec<usize>,
    pub partials: Vec<Dyadic>,
}

impl DyadicDecomposition {
    /// `r_k`, with `r_0 = 0`.
    pub fn partial(&self, k: usize) -> Dyadic {
        if k == 0 {
            Dyadic::zero()
        } else {
            self.partials[k - 1].clone()
        }
    }
}

/// First `k` terms of the dyadic decomposition of `seq`:
/// `nᵢ = ⌈-log₂(aᵢ - rᵢ₋₁)⌉`, `rᵢ = rᵢ₋₁ + 2^-nᵢ`.
///
/// Every term is checked against `rᵢ₋₁ < aᵢ` and
/// `(aᵢ + rᵢ₋₁)/2 ≤ rᵢ ≤ aᵢ`.
pub fn dyadic_decompose(seq: &RationalSeq, k: usize) -> Result<DyadicDecomposition, CeRealError> {
    seq.require(k)?;
    let two = Rational::from_integer(2.into());
    let mut out = DyadicDecomposition::default();
    let mut r_prev = Dyadic::zero();
    for (i, a) in seq.terms()[..k].iter().enumerate() {
        let r_prev_q = r_prev.to_rational();
        if r_prev_q >= *a {
            return Err(CeRealError::Sandwich(i + 1));
        }
        let n = ceil_neg_log2(&(a - &r_prev_q)).map_err(|_| CeRealError::Sandwich(i + 1))?;
        let r = &r_prev + &pow2_neg(n);
        let r_q = r.to_rational();
        if !((a + &r_prev_q) / &two <= r_q && r_q <= *a) {
            return Err(CeRealError::Sandwich(i + 1));
        }
        out.lengths.push(n);
        out.partials.push(r.clone());
        r_prev = r;
    }
    Ok(out)
}

/// Machine whose domain has measure `r_k`: the first `k` decomposition
/// lengths are allocated as codewords, each mapped to the empty output.
pub fn to_machine(seq: &RationalSeq, k: usize) -> Result<MachineTable, CeRealError> {
    let dec = dyadic_decompose(seq, k)?;
    let requests: Vec<Request> = dec.lengths.iter().map(|&n| Request::new(n, BitString::empty())).collect();
    let entries = allocate_all(&requests)?;
    Ok(MachineTable::from_allocation(entries))
}
