//! Solovay domination: the interval test built from two approximations, the
//! witness subsequences it yields, and the Ω-representation machinery.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{pow2_neg_rational, Dyadic, Interval, Rational};
use crate::bits::BitString;
use crate::ce_real::{CeRealError, RationalSeq};
use crate::codespace::{allocate_all, AllocError, Request};
use crate::machines::{compose, MachineError, MachineTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolovayError {
    #[error(transparent)]
    InvalidSequence(#[from] CeRealError),
    #[error("prefixes differ in length ({a} vs {b})")]
    LengthMismatch { a: usize, b: usize },
    #[error(transparent)]
    Stage(#[from] MachineError),
    #[error("the reference machine has an empty domain")]
    EmptyMachine,
    #[error(transparent)]
    InsufficientMass(#[from] AllocError),
}

/// Stages `T_n[1..=depth]` of the interval test at level `n`. Empty stages
/// are stored as empty intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestStage {
    pub level: usize,
    pub intervals: Vec<Interval>,
}

impl TestStage {
    /// 1-based indices of the non-empty stages.
    pub fn non_empty_stages(&self) -> Vec<usize> {
        self.intervals
            .iter()
            .enumerate()
            .filter(|(_, iv)| !iv.is_empty())
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(Interval::length).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn pairwise_disjoint(&self) -> bool {
        let live: Vec<&Interval> = self.intervals.iter().filter(|iv| !iv.is_empty()).collect();
        live.iter()
            .enumerate()
            .all(|(i, a)| live[i + 1..].iter().all(|b| a.is_disjoint(b)))
    }

    /// Whether the stages form a valid test level: disjoint intervals of
    /// total measure at most `2^-level`.
    pub fn is_valid(&self) -> bool {
        self.pairwise_disjoint() && self.measure() <= pow2_neg_rational(self.level)
    }
}

impl fmt::Display for TestStage {
    /// `i<TAB>lo<TAB>hi` per stage, `i<TAB>-` for empty ones.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if iv.is_empty() {
                writeln!(f, "{}\t-", i + 1)?;
            } else {
                writeln!(f, "{}\t{}\t{}", i + 1, iv.lo(), iv.hi())?;
            }
        }
        Ok(())
    }
}

fn check_depth(a: &RationalSeq, b: &RationalSeq, depth: usize) -> Result<(), SolovayError> {
    for s in [a, b] {
        if depth > s.len() {
            return Err(CeRealError::PrefixTooShort { requested: depth, available: s.len() }.into());
        }
    }
    Ok(())
}

/// Level-`n` interval test over the first `depth` terms.
///
/// `T_n[i] = [a_i, a_i + 2^-n (b_i - b_s))` when `a_i` lies outside every
/// earlier interval, where `s` is the most recent non-empty stage (0 before
/// the first); otherwise `T_n[i]` is empty. `a_0 = b_0 = 0`.
pub fn build_test(a: &RationalSeq, b: &RationalSeq, n: usize, depth: usize) -> Result<TestStage, SolovayError> {
    check_depth(a, b, depth)?;
    let scale = pow2_neg_rational(n);
    let mut intervals: Vec<Interval> = Vec::with_capacity(depth);
    let mut last_live = 0usize;
    for i in 1..=depth {
        let ai = a.term(i);
        if intervals.iter().any(|iv| iv.contains(&ai)) {
            intervals.push(Interval::empty());
            continue;
        }
        let hi = &ai + &scale * (b.term(i) - b.term(last_live));
        intervals.push(Interval::new(ai, hi).expect("b is increasing"));
        last_live = i;
    }
    Ok(TestStage { level: n, intervals })
}

/// Non-empty stages `s_1 < s_2 < …` of the level-`exponent` test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationWitness {
    pub stage_indices: Vec<usize>,
    pub exponent: usize,
}

impl DominationWitness {
    /// `a'_j = a_{s_j}` and `b'_j = b_{s_{j-1}}` for `j = 1..=J`, with
    /// `s_0 = 0`.
    pub fn subsequences(&self, a: &RationalSeq, b: &RationalSeq) -> (Vec<Rational>, Vec<Rational>) {
        let a_sub = self.stage_indices.iter().map(|&s| a.term(s)).collect();
        let b_sub = std::iter::once(0)
            .chain(self.stage_indices.iter().copied())
            .take(self.stage_indices.len())
            .map(|s| b.term(s))
            .collect();
        (a_sub, b_sub)
    }

    /// `b'_{j+1} - b'_j ≤ 2^m (a'_{j+1} - a'_j)` for every consecutive pair.
    pub fn holds(&self, a: &RationalSeq, b: &RationalSeq) -> bool {
        let (a_sub, b_sub) = self.subsequences(a, b);
        let c = Rational::from_integer(BigInt::from(1) << self.exponent);
        a_sub
            .windows(2)
            .zip(b_sub.windows(2))
            .all(|(aw, bw)| &bw[1] - &bw[0] <= &c * (&aw[1] - &aw[0]))
    }
}

impl fmt::Display for DominationWitness {
    /// `m<TAB>j₁,j₂,…`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.stage_indices.iter().map(usize::to_string).collect();
        write!(f, "{}\t{}", self.exponent, idx.join(","))
    }
}

pub fn extract_witness(a: &RationalSeq, b: &RationalSeq, m: usize, depth: usize) -> Result<DominationWitness, SolovayError> {
    let stage = build_test(a, b, m, depth)?;
    Ok(DominationWitness { stage_indices: stage.non_empty_stages(), exponent: m })
}

/// `2^m`, the domination constant certified by the level-`m` witness.
pub fn domination_constant(m: usize) -> BigInt {
    BigInt::from(1) << m
}

/// Increment form of domination over equal-length prefixes:
/// `b_{j+1} - b_j ≤ c (a_{j+1} - a_j)` for every consecutive pair.
pub fn check_domination(a: &[Rational], b: &[Rational], c: &BigInt) -> Result<bool, SolovayError> {
    if a.len() != b.len() {
        return Err(SolovayError::LengthMismatch { a: a.len(), b: b.len() });
    }
    let c = Rational::from_integer(c.clone());
    Ok(a.windows(2)
        .zip(b.windows(2))
        .all(|(aw, bw)| &bw[1] - &bw[0] <= &c * (&aw[1] - &aw[0])))
}

/// `α_k = 2^-c · ω_k(V) + b_k`, with `b_0 = 0`.
pub fn representation_partial(v: &MachineTable, c: usize, b: &RationalSeq, k: usize) -> Result<Rational, SolovayError> {
    if k > b.len() {
        return Err(CeRealError::PrefixTooShort { requested: k, available: b.len() }.into());
    }
    let omega = v.omega_approx(k)?;
    Ok(omega.scale_pow2_neg(c).to_rational() + b.term(k))
}

/// Interleaved request stream for the Ω-representation: for each of the
/// first `k` programs `v_i` of `V`, a request `(|v_i| + c, v_i)` followed,
/// while γ-lengths remain, by `(m_i, v)` with `v` the first program of `V`.
pub fn interleaved_requests(v: &MachineTable, c: usize, gamma_lengths: &[usize], k: usize) -> Result<Vec<Request>, SolovayError> {
    if k > v.len() {
        return Err(MachineError::StageOutOfRange { stage: k, len: v.len() }.into());
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let anchor = v.programs().next().ok_or(SolovayError::EmptyMachine)?.clone();
    let mut requests = Vec::with_capacity(2 * k);
    for (i, vi) in v.programs().take(k).enumerate() {
        requests.push(Request::new(vi.len() + c, vi.clone()));
        if let Some(&m) = gamma_lengths.get(i) {
            requests.push(Request::new(m, anchor.clone()));
        }
    }
    Ok(requests)
}

/// Pieces of the Ω-representation at one stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaRepresentation {
    pub requests: Vec<Request>,
    /// The allocated machine `M`.
    pub machine: MachineTable,
    /// `U = V ∘ M`.
    pub composed: MachineTable,
    /// Codeword `x_{2i}` allocated for the request `(|v_i| + c, v_i)`.
    pub v_codewords: Vec<BitString>,
    pub measure: Dyadic,
}

pub fn omega_rep_build(v: &MachineTable, c: usize, gamma_lengths: &[usize], k: usize) -> Result<OmegaRepresentation, SolovayError> {
    let requests = interleaved_requests(v, c, gamma_lengths, k)?;
    let machine = MachineTable::from_allocation(allocate_all(&requests)?);
    // V-request i sits after i earlier V-requests and min(i, |γ|) γ-requests.
    let v_codewords = (0..k)
        .map(|i| machine.entries()[i + i.min(gamma_lengths.len())].0.clone())
        .collect();
    let composed = compose(v, &machine);
    let measure = composed.domain_measure();
    Ok(OmegaRepresentation { requests, machine, composed, v_codewords, measure })
}

/// Builds `M` from the interleaved requests and returns `U = V ∘ M` with
/// `μ(dom U)`, which equals `2^-c · ω_k(V) + Σ_{i≤k} 2^-m_i`.
pub fn omega_rep_compose(
    v: &MachineTable,
    c: usize,
    gamma_lengths: &[usize],
    k: usize,
) -> Result<(MachineTable, Dyadic), SolovayError> {
    let rep = omega_rep_build(v, c, gamma_lengths, k)?;
    Ok((rep.composed, rep.measure))
}

/// Right-hand side of the Ω identity at stage `k`.
pub fn expected_rep_measure(v: &MachineTable, c: usize, gamma_lengths: &[usize], k: usize) -> Result<Dyadic, SolovayError> {
    let omega = v.omega_approx(k)?;
    let gamma = Dyadic::sum_pow2_neg(gamma_lengths.iter().take(k).copied());
    Ok(&omega.scale_pow2_neg(c) + &gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn seq(v: &[(i64, i64)]) -> RationalSeq {
        RationalSeq::new(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn table(v: &[&str]) -> MachineTable {
        MachineTable::new(v.iter().map(|p| (p.parse().unwrap(), BitString::empty())).collect()).unwrap()
    }

    #[test]
    fn build_test_example() {
        let a = seq(&[(1, 4), (1, 2), (3, 4)]);
        let b = seq(&[(1, 8), (1, 4), (3, 8)]);
        let t = build_test(&a, &b, 1, 3).unwrap();
        let want = [
            Interval::new(rat(1, 4), rat(5, 16)).unwrap(),
            Interval::new(rat(1, 2), rat(9, 16)).unwrap(),
            Interval::new(rat(3, 4), rat(13, 16)).unwrap(),
        ];
        assert_eq!(t.intervals, want);
        assert_eq!(t.measure(), rat(3, 16));
        assert!(t.is_valid());
        assert_eq!(t.to_string(), "1\t1/4\t5/16\n2\t1/2\t9/16\n3\t3/4\t13/16\n");

        let t0 = build_test(&a, &b, 1, 0).unwrap();
        assert!(t0.intervals.is_empty());
        assert_eq!(t0.measure(), rat(0, 1));
    }

    #[test]
    fn build_test_skips_captured_term() {
        // T_1[1] = [1/4, 1/4 + 1/2 · 1/2) = [1/4, 1/2) captures a_2 = 3/8.
        let a = seq(&[(1, 4), (3, 8), (3, 4)]);
        let b = seq(&[(1, 2), (5, 8), (3, 4)]);
        let t = build_test(&a, &b, 1, 3).unwrap();
        assert!(t.intervals[1].is_empty());
        // Stage 3 measures from the last live stage (1), not from stage 2.
        assert_eq!(t.intervals[2], Interval::new(rat(3, 4), rat(3, 4) + rat(1, 8)).unwrap());
        assert_eq!(t.non_empty_stages(), [1, 3]);
        assert_eq!(t.to_string(), "1\t1/4\t1/2\n2\t-\n3\t3/4\t7/8\n");
        assert!(t.is_valid());
    }

    #[test]
    fn witness_examples() {
        let a = seq(&[(1, 4), (1, 2), (3, 4)]);
        let b = seq(&[(1, 8), (1, 4), (3, 8)]);
        let w = extract_witness(&a, &b, 1, 3).unwrap();
        assert_eq!(w.stage_indices, [1, 2, 3]);
        assert!(w.holds(&a, &b));
        assert_eq!(w.to_string(), "1\t1,2,3");

        let same = extract_witness(&a, &a, 0, 3).unwrap();
        assert!(same.holds(&a, &a));
        let (a_sub, b_sub) = same.subsequences(&a, &a);
        assert!(check_domination(&a_sub, &b_sub, &BigInt::from(1)).unwrap());

        let empty = extract_witness(&a, &b, 2, 0).unwrap();
        assert!(empty.stage_indices.is_empty());
        assert!(empty.holds(&a, &b));
    }

    #[test]
    fn domination_examples() {
        let a = [rat(1, 4), rat(1, 2)];
        assert!(check_domination(&a, &a, &BigInt::from(1)).unwrap());
        assert!(check_domination(&a, &[rat(1, 8), rat(3, 8)], &BigInt::from(1)).unwrap());
        assert!(!check_domination(&a, &[rat(0, 1), rat(1, 2)], &BigInt::from(1)).unwrap());
        assert_eq!(
            check_domination(&a, &[rat(0, 1)], &BigInt::from(1)),
            Err(SolovayError::LengthMismatch { a: 2, b: 1 })
        );
    }

    #[test]
    fn representation_examples() {
        let v = table(&["0", "10"]);
        let b = seq(&[(1, 8), (1, 4)]);
        assert_eq!(representation_partial(&v, 1, &b, 2).unwrap(), rat(5, 8));
        assert_eq!(representation_partial(&v, 1, &b, 0).unwrap(), rat(0, 1));
        let v1 = table(&["0"]);
        assert_eq!(representation_partial(&v1, 0, &seq(&[(1, 16)]), 1).unwrap(), rat(9, 16));
        assert!(representation_partial(&v1, 0, &seq(&[(1, 16)]), 2).is_err());
    }

    #[test]
    fn omega_rep_examples() {
        let v = table(&["0", "10"]);
        let reqs = interleaved_requests(&v, 1, &[2], 2).unwrap();
        let lens: Vec<usize> = reqs.iter().map(|r| r.length).collect();
        assert_eq!(lens, [2, 2, 3]);
        let (u, mu) = omega_rep_compose(&v, 1, &[2], 2).unwrap();
        assert_eq!(mu.to_rational(), rat(5, 8));
        assert_eq!(mu, expected_rep_measure(&v, 1, &[2], 2).unwrap());
        assert_eq!(u.len(), 3);

        let (u, mu) = omega_rep_compose(&v, 1, &[], 0).unwrap();
        assert!(u.is_empty());
        assert_eq!(mu, Dyadic::zero());

        let (u, mu) = omega_rep_compose(&table(&["0"]), 0, &[1], 1).unwrap();
        assert_eq!(mu, Dyadic::one());
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn omega_rep_kraft_failure() {
        let v = table(&["0", "1"]);
        assert!(matches!(
            omega_rep_compose(&v, 0, &[1], 2),
            Err(SolovayError::InsufficientMass(AllocError::InsufficientMass { index: 2, .. }))
        ));
    }
}
