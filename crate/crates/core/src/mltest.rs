//! Finite-stage Martin-Löf test machinery.
//!
//! Covers the complexity test `T^U_m` (strings compressible by more than `m`
//! bits at stage `k`), the compression requests that turn a family of
//! prefix-set stages at levels `n²` into a Kraft-valid request stream, and
//! prefix membership of a finite bit sequence in a stage.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Roots;
use thiserror::Error;

use crate::arith::{pow2_neg, Dyadic};
use crate::bits::{is_prefix_free, measure_of, BitString};
use crate::codespace::{allocate_all, AllocError, Request};
use crate::machines::{MachineError, MachineTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MlTestError {
    #[error("stage at level {level} is not prefix-free")]
    NotPrefixFree { level: usize },
    #[error("stage at level {level} has measure {measure}, above 2^-{level}")]
    MeasureViolation { level: usize, measure: Dyadic },
    #[error("level {0} is not a square n² with n ≥ 2")]
    NotSquareLevel(usize),
    #[error("string {string} is shorter than n = {n} at level {level}")]
    UnderlongString { string: BitString, n: usize, level: usize },
    #[error("total request mass {0} exceeds 1")]
    KraftViolation(Dyadic),
    #[error(transparent)]
    Stage(#[from] MachineError),
    #[error(transparent)]
    Alloc(#[from] AllocError),
}

/// Finite prefix-free set `S_level` with `μ ≤ 2^-level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixSetStage {
    level: usize,
    strings: Vec<BitString>,
}

impl PrefixSetStage {
    pub fn new(level: usize, strings: Vec<BitString>) -> Result<Self, MlTestError> {
        if !is_prefix_free(&strings) {
            return Err(MlTestError::NotPrefixFree { level });
        }
        let measure = measure_of(&strings);
        if measure > pow2_neg(level) {
            return Err(MlTestError::MeasureViolation { level, measure });
        }
        Ok(PrefixSetStage { level, strings })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn strings(&self) -> &[BitString] {
        &self.strings
    }

    pub fn measure(&self) -> Dyadic {
        measure_of(&self.strings)
    }
}

impl fmt::Display for PrefixSetStage {
    /// Level header line, then one string per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.level)?;
        for s in &self.strings {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Outputs `s` among the first `k` entries with `H_k(s) < |s| - m`.
pub fn complexity_test_stage(u: &MachineTable, m: usize, k: usize) -> Result<BTreeSet<BitString>, MlTestError> {
    if k > u.len() {
        return Err(MachineError::StageOutOfRange { stage: k, len: u.len() }.into());
    }
    let candidates: BTreeSet<&BitString> = u.outputs().take(k).collect();
    Ok(candidates
        .into_iter()
        .filter(|s| u.complexity(s, k).is_some_and(|h| h + m < s.len()))
        .cloned()
        .collect())
}

/// Minimal elements under the prefix order: drops every string that extends
/// another member. Result is sorted canonically.
pub fn prune_to_antichain<'a, I>(strings: I) -> Vec<BitString>
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut sorted: Vec<&BitString> = strings.into_iter().collect();
    sorted.sort_by(|a, b| a.bits().cmp(b.bits()));
    sorted.dedup();
    let mut kept: Vec<&BitString> = Vec::new();
    for s in sorted {
        // Lexicographic order puts a prefix right before its extensions.
        if kept.last().is_some_and(|k| k.is_prefix_of(s)) {
            continue;
        }
        kept.push(s);
    }
    let mut out: Vec<BitString> = kept.into_iter().cloned().collect();
    out.sort();
    out
}

/// Cylinder measure of a set after antichain pruning.
pub fn cylinder_measure<'a, I>(strings: I) -> Dyadic
where
    I: IntoIterator<Item = &'a BitString>,
{
    measure_of(&prune_to_antichain(strings))
}

/// The stage of `T^U_m` at `k` as a [`PrefixSetStage`] at level `m`,
/// pruned to its minimal prefixes.
pub fn complexity_test_prefix_set(u: &MachineTable, m: usize, k: usize) -> Result<PrefixSetStage, MlTestError> {
    let raw = complexity_test_stage(u, m, k)?;
    PrefixSetStage::new(m, prune_to_antichain(&raw))
}

/// `n` with `n² = level` and `n ≥ 2`.
fn square_root_level(level: usize) -> Option<usize> {
    let n = level.sqrt();
    (n >= 2 && n * n == level).then_some(n)
}

/// Request `(|s| - n, s)` for every `s` in every stage at level `n²`.
///
/// The total mass is `Σ_n 2^n μ(S_{n²})` and is verified to be at most 1.
pub fn compression_requests(stages: &[PrefixSetStage]) -> Result<Vec<Request>, MlTestError> {
    let mut requests = Vec::new();
    for stage in stages {
        let n = square_root_level(stage.level).ok_or(MlTestError::NotSquareLevel(stage.level))?;
        if let Some(s) = stage.strings.iter().find(|s| s.len() < n) {
            return Err(MlTestError::UnderlongString { string: s.clone(), n, level: stage.level });
        }
        let measure = stage.measure();
        if measure > pow2_neg(stage.level) {
            return Err(MlTestError::MeasureViolation { level: stage.level, measure });
        }
        requests.extend(stage.strings.iter().map(|s| Request::new(s.len() - n, s.clone())));
    }
    let total = Dyadic::sum_pow2_neg(requests.iter().map(|r| r.length));
    if total > Dyadic::one() {
        return Err(MlTestError::KraftViolation(total));
    }
    Ok(requests)
}

/// Allocates the compression requests, giving a machine with
/// `H_M(s) ≤ |s| - n` for every `s ∈ S_{n²}`.
pub fn compression_machine(stages: &[PrefixSetStage]) -> Result<MachineTable, MlTestError> {
    let requests = compression_requests(stages)?;
    let entries = allocate_all(&requests)?;
    Ok(MachineTable::new(entries).expect("allocator output is prefix-free"))
}

/// Some prefix `alpha_bits(m)`, `m ≥ 1`, lies in the stage.
pub fn stage_membership(alpha_bits: &BitString, stage: &PrefixSetStage) -> bool {
    (1..=alpha_bits.len()).any(|m| {
        let p = alpha_bits.prefix(m);
        stage.strings.contains(&p)
    })
}
