//! Finite prefix-free machine tables.
//!
//! A [`MachineTable`] is the graph of a machine listed in enumeration order:
//! entry `i` (1-based) is `g(i) = (program, output)`. Everything here is
//! stage-bounded: `ω_k`, complexities and transforms only look at the first
//! `k` entries, and results that would need more of the table are reported
//! as undefined rather than as errors.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith::{pow2_neg, Dyadic};
use crate::bits::{is_prefix_free, BitString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("program set is not prefix-free")]
    NotPrefixFree,
    #[error("stage {stage} is beyond the table's {len} entries")]
    StageOutOfRange { stage: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MachineTable {
    entries: Vec<(BitString, BitString)>,
}

impl MachineTable {
    /// Validated constructor: programs must be pairwise incomparable.
    pub fn new(entries: Vec<(BitString, BitString)>) -> Result<Self, MachineError> {
        let table = MachineTable { entries };
        if !table.is_prefix_free() {
            return Err(MachineError::NotPrefixFree);
        }
        Ok(table)
    }

    /// No validation; [`check_prefix_free`] reports on the result.
    pub fn new_unchecked(entries: Vec<(BitString, BitString)>) -> Self {
        MachineTable { entries }
    }

    /// Wraps allocator output, which is prefix-free by construction.
    pub(crate) fn from_allocation(entries: Vec<(BitString, BitString)>) -> Self {
        debug_assert!(is_prefix_free(entries.iter().map(|(x, _)| x)));
        MachineTable { entries }
    }

    pub fn entries(&self) -> &[(BitString, BitString)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn programs(&self) -> impl Iterator<Item = &BitString> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn outputs(&self) -> impl Iterator<Item = &BitString> {
        self.entries.iter().map(|(_, y)| y)
    }

    pub fn is_prefix_free(&self) -> bool {
        is_prefix_free(self.programs())
    }

    /// Output on `program`, if it is in the domain.
    pub fn run(&self, program: &BitString) -> Option<&BitString> {
        self.entries.iter().find(|(p, _)| p == program).map(|(_, y)| y)
    }

    fn check_stage(&self, k: usize) -> Result<(), MachineError> {
        if k > self.entries.len() {
            return Err(MachineError::StageOutOfRange { stage: k, len: self.entries.len() });
        }
        Ok(())
    }

    /// `ω_k = Σ_{i≤k} 2^-|π₁(g(i))|`.
    pub fn omega_approx(&self, k: usize) -> Result<Dyadic, MachineError> {
        self.check_stage(k)?;
        Ok(Dyadic::sum_pow2_neg(self.entries[..k].iter().map(|(p, _)| p.len())))
    }

    /// `[ω_1, …, ω_len]`.
    pub fn omega_partials(&self) -> Vec<Dyadic> {
        let mut acc = Dyadic::zero();
        self.entries
            .iter()
            .map(|(p, _)| {
                acc += &pow2_neg(p.len());
                acc.clone()
            })
            .collect()
    }

    /// Measure of the whole domain.
    pub fn domain_measure(&self) -> Dyadic {
        Dyadic::sum_pow2_neg(self.programs().map(BitString::len))
    }

    /// Shortest program among the first `k` entries that outputs `x`;
    /// `None` stands for `∞`. Stages past the end of the table are clamped.
    pub fn complexity(&self, x: &BitString, k: usize) -> Option<usize> {
        self.entries[..k.min(self.entries.len())]
            .iter()
            .filter(|(_, y)| y == x)
            .map(|(p, _)| p.len())
            .min()
    }

    /// Shortest witness program for `x` over the whole table. Ties go to the
    /// earliest entry.
    pub fn shortest_program(&self, x: &BitString) -> Option<&BitString> {
        self.entries
            .iter()
            .filter(|(_, y)| y == x)
            .map(|(p, _)| p)
            .min_by_key(|p| p.len())
    }
}

pub fn omega_approx(m: &MachineTable, k: usize) -> Result<Dyadic, MachineError> {
    m.omega_approx(k)
}

pub fn complexity(m: &MachineTable, x: &BitString, k: usize) -> Option<usize> {
    m.complexity(x, k)
}

pub fn check_prefix_free(m: &MachineTable) -> bool {
    m.is_prefix_free()
}

/// `0^i 1`, the header routing to the `i`-th machine (1-based).
pub fn universal_header(i: usize) -> BitString {
    BitString::zeros(i).with(true)
}

/// `U(0^i 1 x) = M_i(x)` over the machines in order, `i` starting at 1.
pub fn combine_universal(machines: &[MachineTable]) -> MachineTable {
    let entries = machines
        .iter()
        .enumerate()
        .flat_map(|(idx, m)| {
            let header = universal_header(idx + 1);
            m.entries.iter().map(move |(x, y)| (header.concat(x), y.clone()))
        })
        .collect();
    MachineTable { entries }
}

/// Chaitin's transform `C(x)`.
///
/// Defined when `x = π₁(g(j))` and some stage `t ≥ 1` has `0.π₂(g(j)) ≤ ω_t`;
/// the value is the canonically least string not among the first `t`
/// outputs, for the least such `t`.
pub fn chaitin_transform(u: &MachineTable, x: &BitString) -> Option<BitString> {
    let (_, y) = u.entries.iter().find(|(p, _)| p == x)?;
    transform_output(u, &u.omega_partials(), y)
}

fn transform_output(u: &MachineTable, partials: &[Dyadic], y: &BitString) -> Option<BitString> {
    let target = y.binary_fraction();
    let t = partials.iter().position(|w| target <= *w)? + 1;
    let seen: std::collections::HashSet<&BitString> = u.entries[..t].iter().map(|(_, o)| o).collect();
    // At most t strings are excluded, so the search ends within t+1 steps.
    BitString::canonical_iter().find(|v| !seen.contains(v))
}

/// Graph `{(x, C(x))}` of Chaitin's transform over the inputs where it is
/// defined, in the enumeration order of `u`.
pub fn chaitin_table(u: &MachineTable) -> MachineTable {
    let partials = u.omega_partials();
    let entries = u
        .entries
        .iter()
        .filter_map(|(x, y)| transform_output(u, &partials, y).map(|v| (x.clone(), v)))
        .collect();
    MachineTable { entries }
}

/// `U = V ∘ M`: entry `(x, V(m))` for each `(x, m)` of `M` with `m` in the
/// domain of `V`. Other entries of `M` are dropped.
pub fn compose(v: &MachineTable, m: &MachineTable) -> MachineTable {
    let lookup: HashMap<&BitString, &BitString> = v.entries.iter().map(|(p, y)| (p, y)).collect();
    let entries = m
        .entries
        .iter()
        .filter_map(|(x, mid)| lookup.get(mid).map(|out| (x.clone(), (*out).clone())))
        .collect();
    MachineTable { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn table(v: &[(&str, &str)]) -> MachineTable {
        MachineTable::new(v.iter().map(|&(p, y)| (b(p), b(y))).collect()).unwrap()
    }

    fn listing(m: &MachineTable) -> Vec<(String, String)> {
        m.entries().iter().map(|(p, y)| (p.to_string(), y.to_string())).collect()
    }

    #[test]
    fn omega_examples() {
        let m = table(&[("0", "-"), ("10", "-"), ("110", "-")]);
        assert_eq!(m.omega_approx(3).unwrap().to_rational(), rat(7, 8));
        assert_eq!(m.omega_approx(0).unwrap(), Dyadic::zero());
        let m2 = table(&[("00", "-"), ("01", "-")]);
        assert_eq!(m2.omega_approx(2).unwrap().to_rational(), rat(1, 2));
        assert_eq!(m.omega_approx(4), Err(MachineError::StageOutOfRange { stage: 4, len: 3 }));
        let p = m.omega_partials();
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p.last().unwrap(), &m.domain_measure());
    }

    #[test]
    fn complexity_examples() {
        let m = table(&[("00", "1")]);
        assert_eq!(m.complexity(&b("1"), 1), Some(2));
        assert_eq!(m.complexity(&b("0"), 1), None);
        let m = table(&[("00", "1"), ("1", "1")]);
        assert_eq!(m.complexity(&b("1"), 2), Some(1));
        assert_eq!(m.complexity(&b("1"), 1), Some(2));
        assert_eq!(m.complexity(&b("1"), 0), None);
    }

    #[test]
    fn combine_examples() {
        let m1 = table(&[("0", "1")]);
        let m2 = table(&[("1", "0")]);
        assert_eq!(listing(&combine_universal(std::slice::from_ref(&m1))), [("010".into(), "1".into())]);
        assert!(combine_universal(&[]).is_empty());
        let u = combine_universal(&[m1, m2]);
        assert_eq!(
            listing(&u),
            [("010".to_string(), "1".to_string()), ("0011".to_string(), "0".to_string())]
        );
        assert!(u.is_prefix_free());
    }

    #[test]
    fn chaitin_examples() {
        let u = table(&[("0", "1"), ("10", "0")]);
        assert_eq!(chaitin_transform(&u, &b("0")), Some(BitString::empty()));
        assert_eq!(chaitin_transform(&u, &b("10")), Some(BitString::empty()));
        assert_eq!(chaitin_transform(&u, &b("11")), None);
        // 0."111" = 7/8 exceeds ω = 1/2 + 1/4.
        let u = table(&[("0", "1"), ("10", "111")]);
        assert_eq!(chaitin_transform(&u, &b("10")), None);
        assert_eq!(chaitin_table(&u).len(), 1);
    }

    #[test]
    fn chaitin_skips_earlier_outputs() {
        // 0."11" = 3/4 first reached at t = 2, so ε and "0" are excluded.
        let u = table(&[("00", "-"), ("1", "0"), ("01", "11")]);
        assert_eq!(chaitin_transform(&u, &b("01")), Some(b("1")));
    }

    #[test]
    fn compose_examples() {
        let v = table(&[("0", "1")]);
        assert_eq!(listing(&compose(&v, &table(&[("00", "0")]))), [("00".into(), "1".into())]);
        assert!(compose(&v, &table(&[("00", "11")])).is_empty());
        let u = compose(&v, &table(&[("00", "0"), ("01", "0")]));
        assert_eq!(
            listing(&u),
            [("00".to_string(), "1".to_string()), ("01".to_string(), "1".to_string())]
        );
    }

    #[test]
    fn prefix_free_checks() {
        assert!(check_prefix_free(&table(&[("0", "-"), ("10", "-")])));
        let bad = MachineTable::new_unchecked(vec![(b("0"), b("-")), (b("01"), b("-"))]);
        assert!(!check_prefix_free(&bad));
        assert!(check_prefix_free(&MachineTable::default()));
        assert_eq!(
            MachineTable::new(vec![(b("0"), b("-")), (b("01"), b("-"))]),
            Err(MachineError::NotPrefixFree)
        );
    }
}
