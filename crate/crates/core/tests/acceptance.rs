//! Acceptance criteria, one PASS/FAIL line each at exact tolerance.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Criteria that cannot hold are printed as FAIL and their known outcome is
//! frozen by assertions, so a change in behavior still breaks the build.

use std::collections::BTreeSet;
use std::time::Instant;

use itertools::Itertools;
use rpq_core::check::{CheckOutcome, Status};
use rpq_core::matrix_model::{verify_bell_recursion, verify_det_property, verify_toy_duality, wtilde_mismatches, ToyParams};
use rpq_core::scalar::{int, ratio};
use rpq_core::suite::{self, emit, list_checks, FamilyChoice, Format, RunConfig, SuiteSelector, ANCHORS};
use rpq_core::w_single::{verify_sub2n_closure, Single};
use rpq_core::{Deformation, Scalar};

fn line(n: usize, ok: bool, started: Instant, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} ({:.1} s) {detail}", started.elapsed().as_secs_f64());
}

fn pq_points() -> Vec<(Scalar, Scalar)> {
    vec![(ratio(2, 3), ratio(1, 5)), (ratio(1, 2), ratio(1, 3)), (ratio(3, 4), ratio(1, 7))]
}

fn forced_suite() {
    let started = Instant::now();
    let mut failing = BTreeSet::new();
    let mut records = 0;
    for family in [FamilyChoice::TwoParameter, FamilyChoice::OneParameterQ] {
        let cfg = RunConfig {
            family,
            window: 12,
            suite: SuiteSelector::Forced,
            ..RunConfig::default()
        };
        let report = suite::run(&cfg).expect("forced run");
        records += report.checks.len();
        for c in &report.checks {
            assert_ne!(c.status, Status::Skipped, "{} {} skipped", c.id, c.params);
            if c.status == Status::Fail {
                failing.insert(c.id.clone());
            }
        }
        assert_eq!(report.exit_code(), 1);
    }
    let expected: BTreeSet<String> = ["forced.calw_recursive_closed".to_string()].into();
    assert_eq!(failing, expected);
    line(
        1,
        failing.is_empty(),
        started,
        &format!(
            "{records} forced records over pq and q at |n| <= 12; failing ids: {failing:?}. \
             The recursion through [x^2, W^(s-1)_(m+2)] uses an undeformed commutator and picks up dilation terms \
             (s=2, m=0 on z: 13/60 against the closed form 1/2 at p=2/3, q=1/5), so exit code 0 is unattainable; \
             every other forced identity holds exactly"
        ),
    );
}

fn bell() {
    let started = Instant::now();
    let outcome = verify_bell_recursion(8, 8);
    assert!(outcome.passed(), "{outcome:?}");
    line(2, true, started, "series exponentiation equals the binomial recursion for k <= 8");
}

fn det_property() {
    let started = Instant::now();
    let w = 8;
    let mut outcomes: Vec<CheckOutcome> = (1..=4).map(|m| verify_det_property(m, &[int(2)], w)).collect();
    for xs in [vec![int(1), int(2)], vec![int(2), int(3)], vec![int(1), int(2), int(3)]] {
        outcomes.extend((1..=3).map(|m| verify_det_property(m, &xs, w)));
    }
    let bad: Vec<_> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.params.clone()).collect();
    assert!(bad.is_empty(), "{bad:?}");
    line(3, true, started, &format!("{} determinant checks at W = {w}", outcomes.len()));
}

fn wtilde() {
    let started = Instant::now();
    let (m, n, w) = (3, 1, 6);
    let mut shapes = Vec::new();
    for (p, q) in pq_points() {
        let d = Deformation::two_parameter(p, q).unwrap();
        let per_rank: Vec<_> = (2..=4).map(|r| wtilde_mismatches(&d, m, r, n, w).unwrap()).collect();
        shapes.push(per_rank);
    }
    let first = &shapes[0];
    for other in &shapes[1..] {
        for (a, b) in first.iter().zip(other) {
            assert_eq!(a.keys, b.keys, "mismatch structure moved between parameter points");
            assert_eq!(a.ratio, b.ratio);
        }
    }
    let [r2, r3, r4] = [&first[0], &first[1], &first[2]];
    assert!(!r2.keys.is_empty());
    assert_eq!(r2.ratio, Some(-int(1)));
    assert!(r3.keys.is_empty());
    assert_eq!(r4.ratio, Some(-int(1)));
    line(
        4,
        r2.keys.is_empty(),
        started,
        &format!(
            "r=2 differs from its display on {} terms with general = -1 x display, r=3 matches, r=4 differs on {} terms \
             with the same -1; structure identical at 3 (p,q) points, so the r=2 display carries an overall sign",
            r2.keys.len(),
            r4.keys.len()
        ),
    );
}

fn toy_duality() {
    let started = Instant::now();
    let mut per_point: Vec<Vec<(Status, Option<(Vec<i64>, Vec<i64>)>)>> = Vec::new();
    let mut tuples = 0;
    let mut full_pass = 0;
    for (p, q) in pq_points().into_iter().take(2) {
        let d = Deformation::two_parameter(p, q).unwrap();
        let mut shape = Vec::new();
        for (r, m, gamma, a) in itertools::iproduct!(1..=3, 0..=2, 0..=1, 1..=2) {
            let params = ToyParams { a, gamma, m, r, order: 6, max_weight: 6 };
            let (full, origin) = verify_toy_duality(&d, &params);
            assert!(origin.passed(), "origin slice {origin:?}");
            match full.status {
                Status::Pass => full_pass += 1,
                Status::Fail => assert!(full.witness.is_some(), "{full:?}"),
                Status::Skipped => panic!("indefinite outcome {full:?}"),
            }
            shape.push((full.status, full.witness.map(|w| (w.mode, w.target))));
            tuples += 1;
        }
        per_point.push(shape);
    }
    assert_eq!(per_point[0], per_point[1], "witness structure moved between parameter points");
    line(
        5,
        true,
        started,
        &format!(
            "t=0 slice exact on all {tuples} tuples; full check definite everywhere \
             ({full_pass} pass, the rest fail with a witness at the same position for both (p,q) points)"
        ),
    );
}

fn completeness() -> Vec<u8> {
    let started = Instant::now();
    let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../spec.md")).expect("scope document");
    let scope = doc.lines().find(|l| l.trim_start().starts_with("In scope:")).expect("in-scope line");
    for anchor in ANCHORS {
        assert!(scope.contains(anchor), "anchor not in scope line: {anchor}");
    }
    let catalog = list_checks();
    let ids: BTreeSet<_> = catalog.iter().map(|e| e.id).collect();
    assert_eq!(ids.len(), catalog.len());
    let anchors_used: BTreeSet<_> = catalog.iter().map(|e| e.anchor).collect();
    assert_eq!(anchors_used.len(), ANCHORS.len());

    let report = suite::run(&RunConfig::default()).expect("default run");
    let seen: BTreeSet<&str> = report.checks.iter().map(|c| c.id.as_str()).collect();
    let missing: Vec<_> = ids.iter().filter(|id| !seen.contains(*id)).collect();
    let unknown: Vec<_> = seen.iter().filter(|id| !ids.contains(*id)).collect();
    let skipped: Vec<_> = report.checks.iter().filter(|c| c.status == Status::Skipped).map(|c| &c.id).collect();
    assert!(missing.is_empty(), "ids without records: {missing:?}");
    assert!(unknown.is_empty(), "records without catalog ids: {unknown:?}");
    assert!(skipped.is_empty(), "skipped: {skipped:?}");
    line(
        6,
        true,
        started,
        &format!(
            "{} anchors of the in-scope list each map to catalog ids ({} ids; multi-line displays get one id per line); \
             the default run emits {} records covering every id, none skipped ({} pass, {} fail)",
            ANCHORS.len(),
            ids.len(),
            report.checks.len(),
            report.summary.pass,
            report.summary.fail
        ),
    );
    emit(&report, Format::Json)
}

fn sub2n() {
    let started = Instant::now();
    let mut details = Vec::new();
    let mut all_ok = true;
    for (tag, family) in [
        ("pq", Deformation::two_parameter(ratio(2, 3), ratio(1, 5))),
        ("q", Deformation::one_parameter(ratio(1, 3))),
    ] {
        let s = Single::new(family.unwrap(), 12);
        for n in [1usize, 2] {
            let tuples: Vec<Vec<i64>> = (-2..=2).combinations(2 * n).collect();
            let nulls: Vec<Vec<i64>> = (-2..=2).combinations(2 * n + 1).collect();
            let (closure, null) = verify_sub2n_closure(&s, n, &tuples, &nulls);
            let outcome = &closure.outcome;
            assert_ne!(outcome.status, Status::Skipped);
            assert_ne!(null.status, Status::Skipped);
            assert!(outcome.status == Status::Pass || outcome.witness.is_some());
            if n == 1 {
                assert_eq!(outcome.status, Status::Fail);
                assert_eq!(null.status, Status::Fail);
                let w = null.witness.as_ref().unwrap();
                assert_ne!(w.expected, rpq_core::scalar::zero());
            }
            all_ok &= outcome.passed() && null.passed();
            details.push(format!(
                "{tag} n={n}: closure {:?}, (2n+1)-bracket {:?}",
                outcome.status, null.status
            ));
        }
    }
    line(
        7,
        all_ok,
        started,
        &format!(
            "{}. On deformed families [W^2_a, W^2_b] z^k = [k]([k+b+1]-[k+a+1]) z^(k+a+b) has a k-dependent ratio \
             to W^2_(a+b), and the antisymmetrized triple product of deformed numbers leaves a nonzero \
             Vandermonde term (e.g. 5832 z^-4 from W^2_-2, W^2_-1, W^2_0 on z^-1 at q = 1/3), so the closure and \
             vanishing claims do not hold as stated",
            details.join("; ")
        ),
    );
}

fn determinism(first: Vec<u8>) {
    let started = Instant::now();
    let second = emit(&suite::run(&RunConfig::default()).expect("default run"), Format::Json);
    assert_eq!(first, second);
    line(8, true, started, &format!("two default runs give identical {}-byte JSON reports", first.len()));
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    forced_suite();
    bell();
    det_property();
    wtilde();
    toy_duality();
    let report = completeness();
    sub2n();
    determinism(report);
}
