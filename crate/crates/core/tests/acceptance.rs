//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Every check is exact; the only tolerances are the wall-clock limits.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use omegakit::kc_oracle::{kc_ref, meas_nat_ref};
use omegakit::verify::{self, SuiteReport, DEFAULT_SEED};
use omegakit::{BitString, Rational};

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Vec<SuiteReport>,
}

fn goldens() -> Vec<SuiteReport> {
    let mut r = verify::golden_examples();
    // Literal values, independent of the sweep helpers.
    let got: Vec<String> = kc_ref(&[4, 3, 2]).iter().map(BitString::to_string).collect();
    if got != ["0110", "010", "00"] {
        r.failures.push(format!("kc [4,3,2] = {got:?}"));
    }
    if meas_nat_ref(&[4, 3, 2]) != Rational::new(7.into(), 16.into()) {
        r.failures.push("meas_nat [4,3,2] ≠ 7/16".into());
    }
    r.checks += 2;
    vec![r]
}

fn oracle_equivalence() -> Vec<SuiteReport> {
    vec![verify::differential_sweep(6, 10_000, 50, 16, DEFAULT_SEED).0]
}

fn invariants_and_extension() -> Vec<SuiteReport> {
    vec![
        verify::differential_sweep(6, 10_000, 50, 16, DEFAULT_SEED).1,
        verify::extension_sweep(1_000, DEFAULT_SEED),
    ]
}

fn decomposition() -> Vec<SuiteReport> {
    vec![verify::repce_sweep(200, 50, DEFAULT_SEED)]
}

fn omega_representation() -> Vec<SuiteReport> {
    vec![verify::omega_rep_sweep(100, DEFAULT_SEED)]
}

fn interval_test() -> Vec<SuiteReport> {
    vec![verify::test_sweep(100, 50, DEFAULT_SEED)]
}

fn chaitin() -> Vec<SuiteReport> {
    vec![verify::chaitin_sweep(50, DEFAULT_SEED)]
}

fn compression() -> Vec<SuiteReport> {
    vec![verify::compression_sweep(20, DEFAULT_SEED)]
}

fn universal() -> Vec<SuiteReport> {
    vec![verify::universal_sweep(100, DEFAULT_SEED)]
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "golden allocator and predicate values", limit: secs(1), run: goldens },
        Criterion { name: "allocator matches functional oracle", limit: secs(60), run: oracle_equivalence },
        Criterion { name: "allocator invariants and monotone extension", limit: secs(60), run: invariants_and_extension },
        Criterion { name: "dyadic decomposition sandwich and measure", limit: secs(30), run: decomposition },
        Criterion { name: "omega representation identity", limit: secs(30), run: omega_representation },
        Criterion { name: "interval test validity and witness", limit: secs(30), run: interval_test },
        Criterion { name: "chaitin transform collapse and bound", limit: secs(30), run: chaitin },
        Criterion { name: "compression of square-level stages", limit: secs(10), run: compression },
        Criterion { name: "universal combination overhead", limit: secs(10), run: universal },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let reports = (c.run)();
        let elapsed = start.elapsed();
        let checks: usize = reports.iter().map(|r| r.checks).sum();
        let ok = reports.iter().all(SuiteReport::passed) && elapsed <= c.limit;
        println!(
            "{} {:<46} checks={:<9} {:>7.2}s (limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            checks,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
        for r in reports.iter().filter(|r| !r.passed()) {
            println!("    {r}");
        }
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
