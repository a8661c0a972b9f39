//! Acceptance criteria 1 through 10 at their stated tolerances.
//!
//! Criteria 1 to 9 are computed once, in order, on a single worker so their
//! runtimes are comparable. Criterion 10 reruns the whole selftest and checks
//! it against that first pass.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use ehs_core::harness::selftest::{run_criterion, run_selftest, Criterion, SelftestOptions, SelftestReport};
use ehs_core::harness::SCHEMA_VERSION;

const OPTS: SelftestOptions = SelftestOptions { seed: 0, quick: false };

struct Timed {
    criterion: Criterion,
    elapsed: Duration,
}

fn single_worker() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| std::env::set_var("EHS_THREADS", "1"));
}

fn criteria() -> &'static [Timed] {
    static CACHE: OnceLock<Vec<Timed>> = OnceLock::new();
    CACHE.get_or_init(|| {
        single_worker();
        (1..=9)
            .map(|n| {
                let start = Instant::now();
                let criterion = run_criterion(n, OPTS).expect("criterion runs");
                Timed { criterion, elapsed: start.elapsed() }
            })
            .collect()
    })
}

/// Prints the verdict line and asserts the pass and any runtime bound.
fn check(number: u32, limit: Option<Duration>) {
    let t = &criteria()[number as usize - 1];
    let within = limit.is_none_or(|l| t.elapsed < l);
    let ok = t.criterion.passed && within;
    let bound = limit.map_or(String::new(), |l| format!(", bound {:.0?}", l));
    println!(
        "criterion {number}: {} in {:.2?}{bound}",
        if ok { "PASS" } else { "FAIL" },
        t.elapsed
    );
    for line in t.criterion.lines() {
        println!("  {line}");
    }
    assert!(t.criterion.passed, "criterion {number} has failing checks");
    assert!(within, "criterion {number} took {:.2?}", t.elapsed);
}

#[test]
fn criterion_01_theta_identities() {
    check(1, Some(Duration::from_secs(1)));
}

#[test]
fn criterion_02_gustafson() {
    check(2, Some(Duration::from_secs(5)));
}

#[test]
fn criterion_03_matrix_inversions() {
    check(3, Some(Duration::from_secs(120)));
}

#[test]
fn criterion_04_vanishing_lemmas() {
    check(4, None);
}

#[test]
fn criterion_05_identity_catalog() {
    check(5, Some(Duration::from_secs(180)));
}

#[test]
fn criterion_06_bailey_pairs() {
    check(6, None);
}

#[test]
fn criterion_07_simplex_box_specializations() {
    check(7, None);
}

#[test]
fn criterion_08_rational_reduction() {
    check(8, None);
}

#[test]
fn criterion_09_quartic_cross_check() {
    check(9, None);
}

#[test]
fn criterion_10_selftest() {
    let first = SelftestReport {
        schema_version: SCHEMA_VERSION,
        seed: OPTS.seed,
        quick: OPTS.quick,
        criteria: criteria().iter().map(|t| t.criterion.clone()).collect(),
    };
    let start = Instant::now();
    let report = run_selftest(OPTS).expect("selftest runs");
    let elapsed = start.elapsed();
    let identical = report.to_json() == first.to_json();
    let within = elapsed < Duration::from_secs(600);
    let ok = report.passed() && identical && within;
    println!(
        "criterion 10: {} in {elapsed:.2?}, bound 600s, exit {}, byte-identical {identical}",
        if ok { "PASS" } else { "FAIL" },
        if report.passed() { 0 } else { 1 }
    );
    assert!(identical, "reruns at one worker differ");
    assert!(within, "selftest took {elapsed:.2?}");
    assert!(report.passed(), "selftest would exit 1");
}
