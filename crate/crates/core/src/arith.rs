//! Exact dyadic and rational arithmetic.
//!
//! Every measure, partial sum and interval endpoint in this crate is an exact
//! value. [`Dyadic`] holds non-negative numbers of the form `m · 2^-e` and is
//! used for code-space masses; [`Rational`] (a reduced big rational) holds the
//! approximants of c.e. reals. No floating point is involved anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Reduced arbitrary-precision rational. Serializes as `p/q` (or `p` when
/// the denominator is one).
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("expected a positive rational, got {0}")]
    NonPositiveInput(Rational),
    #[error("{0} is not a non-negative dyadic rational")]
    NotDyadic(Rational),
    #[error("interval bounds out of order: [{lo}, {hi})")]
    InvertedInterval { lo: Box<Rational>, hi: Box<Rational> },
    #[error("cannot parse {0:?} as a dyadic (expected m/2^e)")]
    ParseDyadic(String),
}

/// Non-negative dyadic rational `mantissa · 2^-exponent`.
///
/// Always canonical: the mantissa is odd, or the value is zero and stored as
/// `0 · 2^0`. Canonical form makes derived equality coincide with numeric
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigUint,
    exponent: usize,
}

impl Dyadic {
    pub fn new(mantissa: BigUint, exponent: usize) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigUint::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mantissa: BigUint::one(), exponent: 0 }
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0) as usize;
        let shift = tz.min(self.exponent);
        if shift > 0 {
            self.mantissa >>= shift;
            self.exponent -= shift;
        }
    }

    /// Multiplies by `2^-k`.
    pub fn scale_pow2_neg(&self, k: usize) -> Self {
        Dyadic::new(self.mantissa.clone(), self.exponent + k)
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let e = self.exponent.max(other.exponent);
        let a = &self.mantissa << (e - self.exponent);
        let b = &other.mantissa << (e - other.exponent);
        if a < b {
            None
        } else {
            Some(Dyadic::new(a - b, e))
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(
            BigInt::from(self.mantissa.clone()),
            BigInt::one() << self.exponent,
        )
    }

    /// Exact conversion from a rational whose reduced denominator is a power
    /// of two.
    pub fn try_from_rational(q: &Rational) -> Result<Self, ArithError> {
        if q.is_negative() {
            return Err(ArithError::NotDyadic(q.clone()));
        }
        let denom = q.denom().magnitude();
        let tz = denom.trailing_zeros().unwrap_or(0);
        if (denom >> tz) != BigUint::one() {
            return Err(ArithError::NotDyadic(q.clone()));
        }
        Ok(Dyadic::new(q.numer().magnitude().clone(), tz as usize))
    }

    /// Exact `Σ 2^-n` over `lengths`.
    ///
    /// Accumulates in `u128` at the common exponent when that cannot
    /// overflow, falling back to big integers otherwise.
    pub fn sum_pow2_neg<I>(lengths: I) -> Dyadic
    where
        I: IntoIterator<Item = usize>,
    {
        let lengths: Vec<usize> = lengths.into_iter().collect();
        let Some(&top) = lengths.iter().max() else {
            return Dyadic::zero();
        };
        if top < 100 && lengths.len() < (1 << 20) {
            let acc: u128 = lengths.iter().map(|&n| 1u128 << (top - n)).sum();
            return Dyadic::new(BigUint::from(acc), top);
        }
        let acc = lengths
            .iter()
            .fold(BigUint::zero(), |acc, &n| acc + (BigUint::one() << (top - n)));
        Dyadic::new(acc, top)
    }

    /// Decimal approximation, for display only.
    pub fn approx_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.mantissa << (e - self.exponent);
        let b = &other.mantissa << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        let a = &self.mantissa << (e - self.exponent);
        let b = &rhs.mantissa << (e - rhs.exponent);
        Dyadic::new(a + b, e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, d| &acc + &d)
    }
}

impl From<&Dyadic> for Rational {
    fn from(d: &Dyadic) -> Rational {
        d.to_rational()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.mantissa, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::ParseDyadic(s.to_string());
        let (m, e) = s.trim().split_once("/2^").ok_or_else(bad)?;
        let mantissa = m.parse::<BigUint>().map_err(|_| bad())?;
        let exponent = e.parse::<usize>().map_err(|_| bad())?;
        Ok(Dyadic::new(mantissa, exponent))
    }
}

/// `2^-n` in canonical form.
pub fn pow2_neg(n: usize) -> Dyadic {
    Dyadic { mantissa: BigUint::one(), exponent: n }
}

/// Least natural `n` with `2^-n ≤ q`.
///
/// Implemented by a doubling comparison on the numerator: `2^-n ≤ p/d` iff
/// `p · 2^n ≥ d`.
pub fn ceil_neg_log2(q: &Rational) -> Result<usize, ArithError> {
    if !q.is_positive() {
        return Err(ArithError::NonPositiveInput(q.clone()));
    }
    let numer = q.numer().magnitude();
    let denom = q.denom().magnitude();
    // Jump close to the answer using bit lengths, then settle exactly.
    let mut n = (denom.bits().saturating_sub(numer.bits()) as usize).saturating_sub(1);
    while (numer << n) < *denom {
        n += 1;
    }
    Ok(n)
}

/// `Σ 2^-nᵢ` over `lengths`.
pub fn measure_of_lengths(lengths: &[usize]) -> Dyadic {
    Dyadic::sum_pow2_neg(lengths.iter().copied())
}

/// Half-open interval `[lo, hi)` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        if lo > hi {
            return Err(ArithError::InvertedInterval { lo: Box::new(lo), hi: Box::new(hi) });
        }
        Ok(Interval { lo, hi })
    }

    /// The empty interval, anchored at zero.
    pub fn empty() -> Self {
        Interval { lo: Rational::zero(), hi: Rational::zero() }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q < &self.hi
    }

    pub fn is_disjoint(&self, other: &Interval) -> bool {
        self.is_empty() || other.is_empty() || self.hi <= other.lo || other.hi <= self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

pub fn interval_contains(a: &Interval, q: &Rational) -> bool {
    a.contains(q)
}

pub fn interval_disjoint(a: &Interval, b: &Interval) -> bool {
    a.is_disjoint(b)
}

/// Parses `p/q` or `p` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    Rational::from_str(s.trim()).ok()
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^-n` as a rational.
/// Nearest `f64`, for display only.
pub fn approx_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn pow2_neg_rational(n: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pow2_neg_examples() {
        assert_eq!(pow2_neg(0), Dyadic::one());
        assert_eq!(pow2_neg(2).to_rational(), rat(1, 4));
        assert_eq!(pow2_neg(4).to_rational(), rat(1, 16));
    }

    #[test]
    fn ceil_neg_log2_examples() {
        assert_eq!(ceil_neg_log2(&rat(1, 1)).unwrap(), 0);
        assert_eq!(ceil_neg_log2(&rat(1, 4)).unwrap(), 2);
        assert_eq!(ceil_neg_log2(&rat(3, 10)).unwrap(), 2);
        assert_eq!(ceil_neg_log2(&rat(7, 2)).unwrap(), 0);
    }

    #[test]
    fn ceil_neg_log2_rejects_non_positive() {
        assert!(matches!(ceil_neg_log2(&rat(0, 1)), Err(ArithError::NonPositiveInput(_))));
        assert!(matches!(ceil_neg_log2(&rat(-1, 3)), Err(ArithError::NonPositiveInput(_))));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measure_of_lengths(&[]), Dyadic::zero());
        assert_eq!(measure_of_lengths(&[4, 3, 2]).to_rational(), rat(7, 16));
        assert_eq!(measure_of_lengths(&[1, 1]), Dyadic::one());
        // Forces the big-integer path.
        assert_eq!(
            measure_of_lengths(&[200, 200, 1]).to_rational(),
            rat(1, 2) + pow2_neg_rational(199)
        );
    }

    #[test]
    fn interval_examples() {
        let a = Interval::new(rat(1, 4), rat(5, 16)).unwrap();
        let b = Interval::new(rat(1, 2), rat(9, 16)).unwrap();
        assert!(a.contains(&rat(1, 4)));
        assert!(!a.contains(&rat(5, 16)));
        assert!(a.is_disjoint(&b));
        assert!(!a.is_disjoint(&Interval::new(rat(5, 16) - rat(1, 100), rat(1, 2)).unwrap()));
        assert!(Interval::new(rat(1, 2), rat(1, 4)).is_err());
        assert!(Interval::empty().is_disjoint(&a));
    }

    #[test]
    fn dyadic_text_round_trip() {
        let d = Dyadic::new(BigUint::from(28u32), 6);
        assert_eq!(d.to_string(), "7/2^4");
        assert_eq!("7/2^4".parse::<Dyadic>().unwrap(), d);
        assert!("7/16".parse::<Dyadic>().is_err());
    }

    #[test]
    fn dyadic_sub() {
        let a = measure_of_lengths(&[1]);
        let b = measure_of_lengths(&[2]);
        assert_eq!(a.checked_sub(&b).unwrap(), b);
        assert!(b.checked_sub(&a).is_none());
    }

    #[test]
    fn not_dyadic() {
        assert!(Dyadic::try_from_rational(&rat(1, 3)).is_err());
        assert!(Dyadic::try_from_rational(&rat(-1, 2)).is_err());
    }

    proptest! {
        #[test]
        fn pow2_neg_matches_rational(n in 0usize..300) {
            prop_assert_eq!(pow2_neg(n).to_rational(), pow2_neg_rational(n));
        }

        #[test]
        fn ceil_neg_log2_brackets(p in 1i64..10_000, d in 1i64..10_000) {
            let q = rat(p, d);
            let n = ceil_neg_log2(&q).unwrap();
            prop_assert!(pow2_neg_rational(n) <= q);
            if n >= 1 {
                prop_assert!(q < pow2_neg_rational(n - 1));
            }
            prop_assert_eq!(q >= rat(1, 1), n == 0);
        }

        #[test]
        fn measure_permutation_and_concat(
            xs in prop::collection::vec(0usize..40, 0..20),
            ys in prop::collection::vec(0usize..40, 0..20),
        ) {
            let mut rev = xs.clone();
            rev.reverse();
            prop_assert_eq!(measure_of_lengths(&xs), measure_of_lengths(&rev));
            let cat: Vec<usize> = xs.iter().chain(ys.iter()).copied().collect();
            prop_assert_eq!(
                measure_of_lengths(&cat),
                measure_of_lengths(&xs) + measure_of_lengths(&ys)
            );
        }

        #[test]
        fn dyadic_rational_round_trip(m in 0u64..1_000_000, e in 0usize..80) {
            let d = Dyadic::new(BigUint::from(m), e);
            let q = d.to_rational();
            prop_assert_eq!(Dyadic::try_from_rational(&q).unwrap(), d.clone());
            prop_assert_eq!(q, rat(m as i64, 1) * pow2_neg_rational(e));
        }
    }
}
