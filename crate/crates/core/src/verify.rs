//! Seeded property sweeps over every construction in the crate.
//!
//! Each sweep returns a [`SuiteReport`] counting the checks it ran and
//! describing every failure. The sizes are parameters so the same sweeps
//! back both the `verify` subcommand and the acceptance tests.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{measure_of_lengths, pow2_neg, pow2_neg_rational, Dyadic, Rational};
use crate::bits::{is_prefix_free, BitString};
use crate::ce_real::{dyadic_decompose, to_machine};
use crate::codespace::{allocate_lengths, check_invariants, extend_prefix, AllocatorState};
use crate::kc_oracle::{extends_ref, kc_ref, kcloop_ref, kcstep_ref, lengths_match_ref, meas_nat_ref, prefixfree_ref, FreePool};
use crate::machines::{chaitin_table, chaitin_transform, combine_universal, universal_header};
use crate::mltest::{compression_machine, compression_requests, complexity_test_stage, cylinder_measure};
use crate::solovay::{build_test, check_domination, expected_rep_measure, extract_witness, omega_rep_build};

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        // Keep reports readable when something breaks wholesale.
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self) -> usize {
        self.failures.len()
    }

    fn merge(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<10} {} checks={} failed={}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.failed()
        )?;
        for msg in self.failures.iter().filter(|m| !m.is_empty()) {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Kc,
    Oracle,
    Repce,
    Omega,
    Dominate,
    Mltest,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "kc" => Suite::Kc,
            "oracle" => Suite::Oracle,
            "repce" => Suite::Repce,
            "omega" => Suite::Omega,
            "dominate" => Suite::Dominate,
            "mltest" => Suite::Mltest,
            "all" => Suite::All,
            other => return Err(format!("unknown suite {other:?}")),
        })
    }
}

/// Runs a named suite at its default sizes.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<SuiteReport> {
    match suite {
        Suite::Kc => {
            let mut r = golden_examples();
            r.merge(invariant_sweep(2_000, 50, 16, seed));
            r.merge(extension_sweep(1_000, seed));
            r.name = "kc".into();
            vec![r]
        }
        Suite::Oracle => vec![oracle_sweep(6, 10_000, 50, 16, seed)],
        Suite::Repce => vec![repce_sweep(200, 50, seed)],
        Suite::Omega => {
            let mut r = chaitin_sweep(50, seed);
            r.merge(universal_sweep(100, seed));
            r.name = "omega".into();
            vec![r]
        }
        Suite::Dominate => {
            let mut r = test_sweep(100, 50, seed);
            r.merge(omega_rep_sweep(100, seed));
            r.name = "dominate".into();
            vec![r]
        }
        Suite::Mltest => {
            let mut r = compression_sweep(20, seed);
            r.merge(complexity_test_sweep(50, seed));
            r.name = "mltest".into();
            vec![r]
        }
        Suite::All => [Suite::Kc, Suite::Oracle, Suite::Repce, Suite::Omega, Suite::Dominate, Suite::Mltest]
            .into_iter()
            .flat_map(|s| run_suite(s, seed))
            .collect(),
    }
}

fn strs(v: &[BitString]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Fixed reference values of the functional allocator and predicates.
pub fn golden_examples() -> SuiteReport {
    use crate::kc_oracle::{extend_ref, incomparable_ref, prefixes_ref};
    let mut r = SuiteReport::new("golden");
    let b = |s: &str| -> BitString { s.parse().expect("literal") };

    let ext = extend_prefix(&b("001"), 5).expect("valid target");
    r.check(strs(&ext) == ["00100", "00101", "0011"], || format!("extend_prefix(001, 5) = {:?}", strs(&ext)));
    let ext_ref = extend_ref(&b("001"), 2);
    r.check(ext_ref == ext, || "extend_ref disagrees with extend_prefix".into());

    let (a, f) = kcstep_ref(&[], &FreePool::initial(), 2);
    r.check(strs(&a) == ["00"] && strs(&f.strings) == ["01", "1"], || "kcstep [] [[]] 2".into());
    let mut st = AllocatorState::new();
    let x = st.allocate(2).expect("fresh state");
    r.check(x == b("00") && strs(st.free()) == ["01", "1"], || "allocate(2) on a fresh state".into());

    let (a, f) = kcloop_ref(&[3, 2], (Vec::new(), FreePool::initial()));
    r.check(strs(&a) == ["010", "00"] && strs(&f.strings) == ["011", "1"], || "kcloop [3,2]".into());
    let x = st.allocate(3).expect("room left");
    r.check(x == b("010") && strs(st.free()) == ["011", "1"], || "allocate(3) after allocate(2)".into());

    let kc = kc_ref(&[4, 3, 2]);
    r.check(strs(&kc) == ["0110", "010", "00"], || format!("kc [4,3,2] = {:?}", strs(&kc)));
    let imp = allocate_lengths(&[2, 3, 4]).map(|v| strs(&v));
    r.check(imp.as_deref() == Ok(&["00".to_string(), "010".into(), "0110".into()][..]), || {
        format!("allocate_all [2,3,4] = {imp:?}")
    });

    let seven_sixteenths = Rational::new(7.into(), 16.into());
    r.check(meas_nat_ref(&[4, 3, 2]) == seven_sixteenths, || "meas_nat [4,3,2]".into());
    r.check(measure_of_lengths(&[4, 3, 2]).to_rational() == seven_sixteenths, || "measure_of_lengths [4,3,2]".into());

    r.check(prefixes_ref(&b("001"), &b("00")), || "prefixes [0,0,1] [0,0]".into());
    r.check(incomparable_ref(&b("00"), &[b("10"), b("111")]), || "incomparable [0,0] [[1,0],[1,1,1]]".into());
    r.check(prefixfree_ref(&[b("00"), b("10"), b("111")]), || "prefixfree [[0,0],[1,0],[1,1,1]]".into());
    r.check(lengths_match_ref(&[b("00"), b("10"), b("111")], &[2, 2, 3]), || "lengthsmatch".into());
    r
}

/// Calls `f` on every multiset of lengths in `0..=max_len` with
/// `Σ 2^-n ≤ 1`, listed in non-decreasing order.
pub fn for_each_kraft_multiset<F: FnMut(&[usize])>(max_len: usize, mut f: F) {
    fn go<F: FnMut(&[usize])>(len: usize, max_len: usize, budget: u64, acc: &mut Vec<usize>, f: &mut F) {
        if len > max_len {
            f(acc);
            return;
        }
        let weight = 1u64 << (max_len - len);
        let mut count = 0;
        loop {
            go(len + 1, max_len, budget - count * weight, acc, f);
            if (count + 1) * weight > budget {
                break;
            }
            count += 1;
            acc.push(len);
        }
        acc.truncate(acc.len() - count as usize);
    }
    go(0, max_len, 1u64 << max_len, &mut Vec::new(), &mut f);
}

fn check_against_oracle(r: &mut SuiteReport, inv: &mut SuiteReport, lengths: &[usize]) {
    let mut state = AllocatorState::new();
    let mut codewords = Vec::with_capacity(lengths.len());
    for (i, &n) in lengths.iter().enumerate() {
        match state.allocate(n) {
            Ok(x) => codewords.push(x),
            Err(e) => {
                r.check(false, || format!("{lengths:?}: allocation {i} failed: {e}"));
                return;
            }
        }
        let report = check_invariants(&state, Some(&lengths[i + 1..]));
        inv.check(report.all_pass(), || format!("{lengths:?}: invariants after step {i}: {report:?}"));
    }
    let mut rev = lengths.to_vec();
    rev.reverse();
    let mut oracle = kc_ref(&rev);
    oracle.reverse();
    r.check(oracle == codewords, || {
        format!("{lengths:?}: oracle {:?} vs allocator {:?}", strs(&oracle), strs(&codewords))
    });
    let newest_first = kc_ref(&rev);
    r.check(prefixfree_ref(&newest_first), || format!("{lengths:?}: oracle output not prefix-free"));
    r.check(lengths_match_ref(&newest_first, &rev), || format!("{lengths:?}: oracle lengths mismatch"));
    r.check(is_prefix_free(&codewords), || format!("{lengths:?}: allocator output not prefix-free"));
    r.check(*state.mass_allocated() == measure_of_lengths(lengths), || format!("{lengths:?}: mass counter"));
    r.check(crate::bits::measure_of(&codewords) == measure_of_lengths(lengths), || format!("{lengths:?}: codeword measure"));
}

pub mod gen {
    //! Seeded random instance generators.

    use super::*;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Up to `max_count` lengths in `0..=max_len` whose Kraft sum stays
    /// at most 1. Lengths that would overflow are redrawn a few times, then
    /// the sequence ends.
    pub fn kraft_lengths(rng: &mut impl Rng, max_count: usize, max_len: usize) -> Vec<usize> {
        let count = rng.random_range(0..=max_count);
        let mut used = 0u128;
        let full = 1u128 << max_len;
        let mut out = Vec::with_capacity(count);
        'outer: for _ in 0..count {
            for _ in 0..8 {
                let n = rng.random_range(0..=max_len);
                let w = 1u128 << (max_len - n);
                if used + w <= full {
                    used += w;
                    out.push(n);
                    continue 'outer;
                }
            }
            break;
        }
        out
    }

    pub fn bits(rng: &mut impl Rng, len: usize) -> BitString {
        BitString::from_bits((0..len).map(|_| rng.random_bool(0.5)).collect())
    }

    /// Strictly increasing rationals in `(0, 1)`: each term closes a random
    /// fraction of the remaining gap to 1.
    pub fn increasing_sequence(rng: &mut impl Rng, len: usize) -> crate::ce_real::RationalSeq {
        let mut seq = crate::ce_real::RationalSeq::default();
        let mut prev = Rational::zero();
        for _ in 0..len {
            let d: i64 = rng.random_range(2..=40);
            let p: i64 = rng.random_range(1..d);
            let next = &prev + (Rational::one() - &prev) * Rational::new(p.into(), d.into());
            seq.push(next.clone()).expect("strictly inside (prev, 1)");
            prev = next;
        }
        seq
    }

    /// Random prefix-free table of up to `max_entries` programs of length
    /// `1..=max_len`, outputs drawn from all strings of length `≤ max_out`.
    pub fn prefix_free_table(rng: &mut impl Rng, max_entries: usize, max_len: usize, max_out: usize) -> crate::machines::MachineTable {
        let target = rng.random_range(1..=max_entries);
        let mut entries: Vec<(BitString, BitString)> = Vec::new();
        for _ in 0..target * 8 {
            if entries.len() == target {
                break;
            }
            let len = rng.random_range(1..=max_len);
            let p = bits(rng, len);
            if entries.iter().all(|(q, _)| !q.is_comparable(&p)) {
                let out_len = rng.random_range(0..=max_out);
                entries.push((p, bits(rng, out_len)));
            }
        }
        crate::machines::MachineTable::new(entries).expect("built incomparable")
    }

    /// Prefix-free set of exact measure `2^-level`: a random cylinder of
    /// that length split into a random complete subtree.
    pub fn full_stage(rng: &mut impl Rng, level: usize, splits: usize) -> Vec<BitString> {
        let mut set = vec![bits(rng, level)];
        for _ in 0..splits {
            let i = rng.random_range(0..set.len());
            let s = set.swap_remove(i);
            set.push(s.with(false));
            set.push(s.with(true));
        }
        set
    }
}

/// Five allocator invariants after every allocation of random Kraft-valid
/// request streams.
pub fn invariant_sweep(runs: usize, max_count: usize, max_len: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("invariants");
    let mut rng = gen::rng(seed);
    for _ in 0..runs {
        let lengths = gen::kraft_lengths(&mut rng, max_count, max_len);
        let mut state = AllocatorState::new();
        for (i, &n) in lengths.iter().enumerate() {
            let before = state.allocated().to_vec();
            let ok = state.allocate(n).is_ok();
            r.check(ok, || format!("{lengths:?}: allocation {i} failed"));
            r.check(state.allocated().starts_with(&before), || format!("{lengths:?}: step {i} rewrote old codewords"));
            let rep = check_invariants(&state, Some(&lengths[i + 1..]));
            r.check(rep.all_pass(), || format!("{lengths:?}: step {i}: {rep:?}"));
            // A fit exists whenever the mass allows one.
            let remaining = state.free_measure();
            let shortest = state.free().last().map(BitString::len);
            for m in 0..=max_len {
                if pow2_neg(m) <= remaining {
                    r.check(shortest.is_some_and(|l| l <= m), || format!("{lengths:?}: no free string of length ≤ {m}"));
                    break;
                }
            }
        }
    }
    r
}

/// Exhaustive multisets plus random streams, allocator against oracle.
/// The second report holds the invariant checks made after every
/// allocation of the same runs.
pub fn differential_sweep(
    exhaustive_max_len: usize,
    random_runs: usize,
    max_count: usize,
    max_len: usize,
    seed: u64,
) -> (SuiteReport, SuiteReport) {
    let mut r = SuiteReport::new("oracle");
    let mut inv = SuiteReport::new("invariants");
    for_each_kraft_multiset(exhaustive_max_len, |ls| {
        check_against_oracle(&mut r, &mut inv, ls);
        let mut desc = ls.to_vec();
        desc.reverse();
        check_against_oracle(&mut r, &mut inv, &desc);
    });
    let mut rng = gen::rng(seed);
    for _ in 0..random_runs {
        let lengths = gen::kraft_lengths(&mut rng, max_count, max_len);
        check_against_oracle(&mut r, &mut inv, &lengths);
    }
    (r, inv)
}

pub fn oracle_sweep(exhaustive_max_len: usize, random_runs: usize, max_count: usize, max_len: usize, seed: u64) -> SuiteReport {
    let (mut r, inv) = differential_sweep(exhaustive_max_len, random_runs, max_count, max_len, seed);
    r.merge(inv);
    r
}

/// Allocating more requests never changes earlier codewords, in both the
/// oracle and the allocator.
pub fn extension_sweep(splits: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("extension");
    let mut rng = gen::rng(seed ^ 0xe7);
    for _ in 0..splits {
        let all = gen::kraft_lengths(&mut rng, 50, 16);
        let cut = rng.random_range(0..=all.len());
        let (first, second) = all.split_at(cut);
        // kc consumes from the back: kc(L2 @ L1) allocates L1 first.
        let l1: Vec<usize> = first.iter().rev().copied().collect();
        let l2: Vec<usize> = second.iter().rev().copied().collect();
        let both: Vec<usize> = l2.iter().chain(&l1).copied().collect();
        let mut long = kc_ref(&both);
        long.reverse();
        let mut short = kc_ref(&l1);
        short.reverse();
        r.check(extends_ref(&long, &short), || format!("oracle not monotone for L1={l1:?} L2={l2:?}"));
        let imp_all = allocate_lengths(&all).expect("kraft-valid");
        let imp_first = allocate_lengths(first).expect("kraft-valid");
        r.check(imp_all[..cut] == imp_first[..], || format!("allocator not monotone for {all:?} at {cut}"));
    }
    r
}

/// Sandwich bounds of the dyadic decomposition and the measure of the
/// resulting machine, recomputed independently in plain rationals.
pub fn repce_sweep(runs: usize, prefix_len: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("repce");
    let mut rng = gen::rng(seed ^ 0x5e9);
    let two = Rational::from_integer(2.into());
    for run in 0..runs {
        let seq = gen::increasing_sequence(&mut rng, prefix_len);
        let dec = match dyadic_decompose(&seq, prefix_len) {
            Ok(d) => d,
            Err(e) => {
                r.check(false, || format!("run {run}: {e}"));
                continue;
            }
        };
        let mut r_prev = Rational::zero();
        for i in 1..=prefix_len {
            let a = seq.term(i);
            let ri = dec.partial(i).to_rational();
            r.check(ri == &r_prev + pow2_neg_rational(dec.lengths[i - 1]), || format!("run {run} term {i}: recurrence"));
            r.check(r_prev < a, || format!("run {run} term {i}: r_(i-1) ≥ a_i"));
            r.check((&a + &r_prev) / &two <= ri && ri <= a, || format!("run {run} term {i}: sandwich"));
            r.check(&a - &ri <= (&a - &r_prev) / &two, || format!("run {run} term {i}: gap not halved"));
            r_prev = ri;
        }
        match to_machine(&seq, prefix_len) {
            Ok(m) => r.check(m.domain_measure() == dec.partial(prefix_len), || format!("run {run}: μ(dom M) ≠ r_k")),
            Err(e) => r.check(false, || format!("run {run}: to_machine: {e}")),
        }
    }
    r
}

/// Chaitin's transform: collapse and complexity non-increase on random
/// tables where it is defined somewhere.
pub fn chaitin_sweep(tables: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("chaitin");
    let mut rng = gen::rng(seed ^ 0xc4a1);
    let mut used = 0;
    while used < tables {
        let u = gen::prefix_free_table(&mut rng, 24, 7, 3);
        let c_table = chaitin_table(&u);
        if c_table.is_empty() {
            continue;
        }
        used += 1;
        r.check(c_table.is_prefix_free(), || "C-table not prefix-free".into());
        let entries = u.entries();
        for (x, y) in entries {
            let cx = chaitin_transform(&u, x);
            for (x2, y2) in entries {
                if y == y2 {
                    let cx2 = chaitin_transform(&u, x2);
                    r.check(cx == cx2, || format!("collapse fails for {x} and {x2}"));
                }
            }
            if let Some(cx) = cx {
                let hc = c_table.complexity(&cx, c_table.len());
                let hu = u.complexity(y, u.len());
                r.check(hc.is_some() && hc <= hu, || format!("H_C({cx}) = {hc:?} > H_U({y}) = {hu:?}"));
            }
        }
    }
    r
}

/// Complexity overhead of the `0^i 1` combination.
pub fn universal_sweep(lists: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("universal");
    let mut rng = gen::rng(seed ^ 0x0417);
    for _ in 0..lists {
        let count = rng.random_range(1..=6);
        let machines: Vec<_> = (0..count).map(|_| gen::prefix_free_table(&mut rng, 10, 6, 3)).collect();
        let u = combine_universal(&machines);
        r.check(u.is_prefix_free(), || "combined table not prefix-free".into());
        for (idx, m) in machines.iter().enumerate() {
            let i = idx + 1;
            for y in m.outputs() {
                let hm = m.complexity(y, m.len()).expect("y is an output");
                let hu = u.complexity(y, u.len());
                r.check(hu.is_some_and(|h| h <= hm + i + 1), || format!("H_U({y}) = {hu:?} > {hm} + {i} + 1"));
                let w = m.shortest_program(y).expect("y is an output");
                let routed = universal_header(i).concat(w);
                r.check(u.run(&routed) == Some(y), || format!("U({routed}) ≠ {y}"));
                r.check(routed.len() == hm + i + 1, || format!("witness {routed} has the wrong length"));
            }
        }
    }
    r
}

/// Interval test validity and witness domination.
pub fn test_sweep(pairs: usize, depth: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("ml-test");
    let mut rng = gen::rng(seed ^ 0x7e57);
    for run in 0..pairs {
        let a = gen::increasing_sequence(&mut rng, depth);
        let b = gen::increasing_sequence(&mut rng, depth);
        for n in 1..=6 {
            let t = match build_test(&a, &b, n, depth) {
                Ok(t) => t,
                Err(e) => {
                    r.check(false, || format!("run {run} level {n}: {e}"));
                    continue;
                }
            };
            r.check(t.pairwise_disjoint(), || format!("run {run} level {n}: overlapping intervals"));
            let live = t.non_empty_stages();
            let last_b = live.last().map_or(Rational::zero(), |&s| b.term(s));
            let mu = t.measure();
            r.check(mu == pow2_neg_rational(n) * &last_b, || format!("run {run} level {n}: measure {mu}"));
            r.check(mu <= pow2_neg_rational(n), || format!("run {run} level {n}: measure {mu} > 2^-{n}"));

            let w = extract_witness(&a, &b, n, depth).expect("same inputs as build_test");
            r.check(w.stage_indices == live, || format!("run {run} level {n}: witness stages"));
            r.check(w.stage_indices.windows(2).all(|p| p[0] < p[1]), || "witness not increasing".into());
            let (a_sub, b_sub) = w.subsequences(&a, &b);
            let c = crate::solovay::domination_constant(n);
            r.check(check_domination(&a_sub, &b_sub, &c) == Ok(true), || format!("run {run} level {n}: domination fails"));
            r.check(w.holds(&a, &b), || format!("run {run} level {n}: witness invariant"));
        }
    }
    r
}

/// Ω identity and length bookkeeping of the interleaved composition.
pub fn omega_rep_sweep(tables: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("omega-rep");
    let mut rng = gen::rng(seed ^ 0x03e9);
    for run in 0..tables {
        let v = gen::prefix_free_table(&mut rng, 20, 8, 4);
        let c = rng.random_range(0..=4);
        let slack = Rational::one() - v.domain_measure().scale_pow2_neg(c).to_rational();
        let gamma: Vec<usize> = if slack.is_zero() {
            Vec::new()
        } else {
            // γ-lengths from the decomposition of a random sequence below the slack.
            let raw = gen::increasing_sequence(&mut rng, v.len());
            let scaled = crate::ce_real::RationalSeq::new(raw.terms().iter().map(|q| q * &slack).collect())
                .expect("scaling by a factor in (0, 1] keeps the range");
            dyadic_decompose(&scaled, scaled.len()).expect("valid sequence").lengths
        };
        for k in 0..=v.len() {
            let rep = match omega_rep_build(&v, c, &gamma, k) {
                Ok(rep) => rep,
                Err(e) => {
                    r.check(false, || format!("run {run} stage {k}: {e}"));
                    continue;
                }
            };
            let want = expected_rep_measure(&v, c, &gamma, k).expect("k within V");
            r.check(rep.measure == want, || format!("run {run} stage {k}: μ = {} ≠ {want}", rep.measure));
            let gamma_part = Dyadic::sum_pow2_neg(gamma.iter().take(k).copied());
            let omega_part = v.omega_approx(k).expect("k within V").scale_pow2_neg(c);
            r.check(rep.measure.checked_sub(&omega_part) == Some(gamma_part), || format!("run {run} stage {k}: γ partial"));
            for (i, (vi, out)) in v.entries()[..k].iter().enumerate() {
                let x = &rep.v_codewords[i];
                r.check(x.len() == vi.len() + c, || format!("run {run}: |x_2i| ≠ |v_i| + c"));
                r.check(rep.composed.run(x) == Some(out), || format!("run {run}: U(x_2i) ≠ V(v_i)"));
                let h = rep.composed.complexity(out, rep.composed.len());
                r.check(h.is_some_and(|h| h <= vi.len() + c), || format!("run {run}: H_U(V(v_i)) > |v_i| + c"));
            }
        }
    }
    r
}

/// Compression requests over full-measure stage families at levels `n²`.
pub fn compression_sweep(families: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("compression");
    let mut rng = gen::rng(seed ^ 0xc0e5);
    let bound: Rational = (2..=6usize).map(|n| pow2_neg_rational(n * n - n)).fold(Rational::zero(), |a, b| a + b);
    r.check(bound <= Rational::one(), || format!("Σ 2^n 2^-n² = {bound} > 1"));
    for _ in 0..families {
        let stages: Vec<_> = (2..=6usize)
            .map(|n| {
                let splits = rng.random_range(0..6);
                crate::mltest::PrefixSetStage::new(n * n, gen::full_stage(&mut rng, n * n, splits))
                    .expect("complete subtree of a single cylinder")
            })
            .collect();
        for s in &stages {
            r.check(s.measure() == pow2_neg(s.level()), || "stage not at its bound".into());
        }
        let reqs = match compression_requests(&stages) {
            Ok(q) => q,
            Err(e) => {
                r.check(false, || format!("compression_requests: {e}"));
                continue;
            }
        };
        let mass = Dyadic::sum_pow2_neg(reqs.iter().map(|q| q.length)).to_rational();
        r.check(mass == bound, || format!("request mass {mass} ≠ {bound}"));
        let m = match compression_machine(&stages) {
            Ok(m) => m,
            Err(e) => {
                r.check(false, || format!("allocation: {e}"));
                continue;
            }
        };
        let lens: Vec<usize> = m.programs().map(BitString::len).collect();
        let want: Vec<usize> = reqs.iter().map(|q| q.length).collect();
        r.check(lens == want, || "codeword lengths do not match requests".into());
        for s in &stages {
            let n = (2..=6).find(|n| n * n == s.level()).expect("square level");
            for x in s.strings() {
                let h = m.complexity(x, m.len());
                r.check(h.is_some_and(|h| h <= x.len() - n), || format!("H_M({x}) > |s| - {n}"));
            }
        }
    }
    r
}

/// Monotonicity in `k` and the measure bound of the complexity test.
pub fn complexity_test_sweep(tables: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("T^U_m");
    let mut rng = gen::rng(seed ^ 0x7);
    for _ in 0..tables {
        // Short programs, long outputs: plenty of compressible strings.
        let u = gen::prefix_free_table(&mut rng, 16, 5, 10);
        for m in 0..4 {
            let mut prev = std::collections::BTreeSet::new();
            for k in 0..=u.len() {
                let cur = complexity_test_stage(&u, m, k).expect("k within table");
                r.check(prev.is_subset(&cur), || format!("T_{m} shrank at stage {k}"));
                let mu = cylinder_measure(&cur);
                r.check(mu <= pow2_neg(m), || format!("μ(T_{m}) = {mu} at stage {k}"));
                prev = cur;
            }
        }
    }
    r
}
