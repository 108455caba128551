//! End-to-end acceptance gate.
//!
//! Prints one `criterion N: PASS/FAIL — ...` line per criterion and then
//! asserts that every criterion passed. Numerical tolerances are pinned as
//! constants in `hyperlag::verify`; stated runtime budgets are part of the
//! criterion they belong to.

use std::process::Command;
use std::time::{Duration, Instant};

use hyperlag::verify::{self, CheckResult};

struct Criterion {
    number: usize,
    passed: bool,
    summary: String,
}

fn from_suite(
    number: usize,
    what: &str,
    budget: Option<Duration>,
    checks: Vec<CheckResult>,
    elapsed: Duration,
) -> Criterion {
    let failed: Vec<&CheckResult> = checks.iter().filter(|c| !c.passed).collect();
    let within = budget.map_or(true, |b| elapsed <= b);
    let mut summary = format!(
        "{what}: {}/{} checks passed in {:.1} s",
        checks.len() - failed.len(),
        checks.len(),
        elapsed.as_secs_f64()
    );
    if let Some(b) = budget {
        summary.push_str(&format!(
            " (budget {} s, {})",
            b.as_secs(),
            if within { "met" } else { "exceeded" }
        ));
    }
    if let Some(first) = failed.first() {
        summary.push_str(&format!("; first failure: {} — {}", first.name, first.details));
    }
    Criterion { number, passed: failed.is_empty() && within, summary }
}

#[test]
fn acceptance() {
    let seed = 987u64;
    let mut results = Vec::new();

    let t = Instant::now();
    results.push(from_suite(
        1,
        "closed-form values",
        Some(Duration::from_secs(60)),
        verify::closed_form_suite(seed),
        t.elapsed(),
    ));

    let t = Instant::now();
    results.push(from_suite(
        2,
        "census gap below the ceiling",
        Some(Duration::from_secs(600)),
        verify::census_gap_suite(seed),
        t.elapsed(),
    ));

    let t = Instant::now();
    results.push(from_suite(
        3,
        "classification identities",
        None,
        verify::classification_suite(),
        t.elapsed(),
    ));

    let t = Instant::now();
    results.push(from_suite(
        4,
        "construction counts",
        None,
        verify::construction_count_suite(),
        t.elapsed(),
    ));

    let t = Instant::now();
    results.push(from_suite(5, "freeness", None, verify::freeness_suite(), t.elapsed()));

    let t = Instant::now();
    results.push(from_suite(
        6,
        "property suites",
        Some(Duration::from_secs(900)),
        verify::property_suite(seed),
        t.elapsed(),
    ));

    // Criterion 7: the installed binary, run twice with one fixed seed,
    // must emit byte-identical JSON.
    let t = Instant::now();
    let invoke = || {
        Command::new(env!("CARGO_BIN_EXE_hyperlag"))
            .args(["verify-all", "--quick", "--seed", "987"])
            .output()
            .expect("verification binary runs")
    };
    let first = invoke();
    let second = invoke();
    let identical = first.stdout == second.stdout && !first.stdout.is_empty();
    let passed = first.status.success() && second.status.success() && identical;
    results.push(Criterion {
        number: 7,
        passed,
        summary: format!(
            "fixed-seed double run: {} bytes of JSON, identical: {}, exit codes {} and {}, {:.1} s",
            first.stdout.len(),
            identical,
            first.status.code().unwrap_or(-1),
            second.status.code().unwrap_or(-1),
            t.elapsed().as_secs_f64()
        ),
    });

    for c in &results {
        println!(
            "criterion {}: {} — {}",
            c.number,
            if c.passed { "PASS" } else { "FAIL" },
            c.summary
        );
    }
    let failing: Vec<usize> = results.iter().filter(|c| !c.passed).map(|c| c.number).collect();
    assert!(
        failing.is_empty(),
        "criteria {failing:?} failed; see the lines above for details"
    );
}
