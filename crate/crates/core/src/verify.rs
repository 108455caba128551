//! Named verification suites with pinned tolerances.
//!
//! Every suite returns a list of [`CheckResult`]s; a check name is a stable
//! `group/detail` string, so reports are diffable across runs and machines.
//! All randomness is derived from the caller's seed, and no check records
//! wall-clock data, so a report for a fixed seed is byte-identical across
//! runs ([`make_report`] serializes in struct order with a content digest).

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::classify::{self, CensusRecord};
use crate::families::{self, Expected};
use crate::hom;
use crate::hypergraph::Hypergraph;
use crate::lagrangian::{self, Maximum, Options, EXHAUSTIVE_MAX_N};
use crate::shifting;
use crate::symmetrize::{self, ChoiceOrder, FivePartition};

/// Absolute error allowed when a value is asserted equal to a closed form.
pub const VALUE_TOL: f64 = 1e-8;
/// Slack allowed on one-sided bound assertions.
pub const BOUND_SLACK: f64 = 1e-9;
/// The ceiling `2/25` that every non-complete family must sit below.
pub const CEILING: f64 = 2.0 / 25.0;
/// Required distance below the ceiling.
pub const GAP: f64 = 1e-3;
/// Numerical slack granted on the gap requirement.
pub const GAP_SLACK: f64 = 1e-8;
/// Tolerance for monotonicity comparisons between related maxima.
pub const MONO_TOL: f64 = 1e-9;
/// Tolerance for invariance of the maximum under vertex cloning.
pub const BLOWUP_TOL: f64 = 1e-8;
/// Relative tolerance for analytic vs finite-difference gradients.
pub const GRAD_REL_TOL: f64 = 1e-6;

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

fn check(name: impl Into<String>, passed: bool, details: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), passed, details: details.into() }
}

/// A full run's worth of checks plus the metadata needed to reproduce it.
/// Serialization is deterministic: field order is fixed and nothing
/// time- or machine-dependent is recorded.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    /// Version of this JSON layout.
    pub schema_version: u32,
    pub tool_version: &'static str,
    /// Which suite produced the report (e.g. `"verify-all"`).
    pub command: String,
    /// Free-form parameter echo (flags, modes).
    pub parameters: serde_json::Value,
    pub seed: u64,
    /// Whether the output is a pure function of command, parameters, seed.
    pub deterministic: bool,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    /// Hex SHA-256 of the serialized check list.
    pub digest: String,
}

/// Schema version written into every report.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Wraps finished checks into a report with an integrity digest.
pub fn make_report(
    command: &str,
    parameters: serde_json::Value,
    seed: u64,
    checks: Vec<CheckResult>,
) -> VerifyReport {
    let payload = serde_json::to_vec(&checks).expect("check list serializes");
    let digest = hex::encode(Sha256::digest(&payload));
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        parameters,
        seed,
        deterministic: true,
        checks,
        passed,
        digest,
    }
}

/// Maximization options used throughout the suites: the exhaustive support
/// sweep is switched on whenever the ground set allows it.
fn maximize_f64(g: &Hypergraph, seed: u64) -> Maximum<f64> {
    let opts = Options {
        seed,
        exhaustive_support: g.n() <= EXHAUSTIVE_MAX_N,
        ..Options::default()
    };
    lagrangian::maximize(g, &opts)
}

fn build_graph(name: &str, n: Option<u32>) -> Hypergraph {
    families::build(name, n, None).expect("catalog family builds").into_graph()
}

fn exact_value_check(name: String, g: &Hypergraph, target: f64, seed: u64) -> CheckResult {
    let m = maximize_f64(g, seed);
    let err = (m.value - target).abs();
    let passed = m.certified && err <= VALUE_TOL;
    check(
        name,
        passed,
        format!(
            "value {:.12e} vs target {:.12e}, |error| {:.3e} (tolerance {:.1e}), certified {}",
            m.value, target, err, VALUE_TOL, m.certified
        ),
    )
}

fn bound_value_check(name: String, g: &Hypergraph, bound: f64, seed: u64) -> CheckResult {
    let m = maximize_f64(g, seed);
    let passed = m.certified && m.value <= bound + BOUND_SLACK;
    check(
        name,
        passed,
        format!(
            "value {:.12e} vs bound {:.12e} (+{:.1e} slack), certified {}",
            m.value, bound, BOUND_SLACK, m.certified
        ),
    )
}

/// Closed-form values of the catalog families, including the parametric
/// sweeps: the triangle-generated families at every ground set from 3 to 9
/// and the point-generated stars from 4 to 12.
pub fn closed_form_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(exact_value_check(
        "closed-forms/k5_3".into(),
        &build_graph("k5_3", None),
        2.0 / 25.0,
        seed,
    ));
    out.push(exact_value_check(
        "closed-forms/f7".into(),
        &build_graph("f7", None),
        1.0 / 27.0,
        seed,
    ));
    for n in 3..=9 {
        out.push(exact_value_check(
            format!("closed-forms/gen_k3-n{n}"),
            &build_graph("gen_k3", Some(n)),
            1.0 / 16.0,
            seed,
        ));
    }
    for n in 4..=12 {
        let target = (n as f64 - 2.0) / (n as f64 - 1.0) * 2.0 / 27.0;
        out.push(exact_value_check(
            format!("closed-forms/star-n{n}"),
            &build_graph("star", Some(n)),
            target,
            seed,
        ));
    }
    out.push(exact_value_check(
        "closed-forms/k5_3_minus".into(),
        &build_graph("k5_3_minus", None),
        (13.0 * 13f64.sqrt() - 35.0) / 162.0,
        seed,
    ));
    out.push(exact_value_check(
        "closed-forms/f6".into(),
        &build_graph("f6", None),
        (9.0 + 6f64.sqrt()) / 225.0,
        seed,
    ));
    out.push(bound_value_check(
        "closed-forms/t6-bound".into(),
        &build_graph("t6", None),
        7.0 / 108.0,
        seed,
    ));
    out
}

fn census_certified_check(prefix: &str, n: u32, records: &[CensusRecord]) -> CheckResult {
    let bad: Vec<&str> = records
        .iter()
        .filter(|r| !r.lambda_certified)
        .map(|r| r.id.as_str())
        .collect();
    check(
        format!("{prefix}/certified-{n}"),
        bad.is_empty(),
        if bad.is_empty() {
            format!("all {} classes carry certified maxima", records.len())
        } else {
            format!("uncertified classes: {}", bad.join(", "))
        },
    )
}

fn census_gap_check(prefix: &str, n: u32, records: &[CensusRecord]) -> CheckResult {
    let ceiling = CEILING - GAP + GAP_SLACK;
    let covering: Vec<&CensusRecord> = records
        .iter()
        .filter(|r| r.covers_pairs && r.catalog_match != Some("k5_3"))
        .collect();
    let offenders: Vec<String> = covering
        .iter()
        .filter(|r| !(r.lambda_certified && r.lambda <= ceiling))
        .map(|r| format!("{} (value {:.12e})", r.id, r.lambda))
        .collect();
    let worst = covering.iter().map(|r| r.lambda).fold(f64::NEG_INFINITY, f64::max);
    check(
        format!("{prefix}/gap-{n}"),
        offenders.is_empty(),
        if covering.is_empty() {
            "no pair-covering classes beside the complete core".to_string()
        } else if offenders.is_empty() {
            format!(
                "{} pair-covering classes beside the complete core, largest value {:.12e} vs ceiling {:.12e}",
                covering.len(),
                worst,
                ceiling
            )
        } else {
            format!("classes above the ceiling {ceiling:.12e}: {}", offenders.join("; "))
        },
    )
}

fn gen_sweep_check(name: &str, min_n: u32, seed: u64, six: &[CensusRecord]) -> CheckResult {
    let ceiling = CEILING - GAP + GAP_SLACK;
    let mut max_support = 0usize;
    let mut max_match_gap = 0.0f64;
    let mut failure: Option<String> = None;
    for n in min_n..=12 {
        let g = build_graph(name, Some(n));
        let m = maximize_f64(&g, seed);
        if !m.certified {
            failure = Some(format!("n={n}: maximum not certified"));
            break;
        }
        if m.value > ceiling {
            failure = Some(format!("n={n}: value {:.12e} above the ceiling {ceiling:.12e}", m.value));
            break;
        }
        let reduced = lagrangian::dominate_reduce(&g, &m.weights);
        let reduced_value = lagrangian::poly_eval(&g, reduced.values());
        if reduced_value < m.value - MONO_TOL {
            failure = Some(format!(
                "n={n}: domination reduction lost value ({:.12e} -> {:.12e})",
                m.value, reduced_value
            ));
            break;
        }
        let support = reduced.support().len();
        if support > 6 {
            failure = Some(format!("n={n}: reduced support has {support} vertices"));
            break;
        }
        max_support = max_support.max(support);
        let best = six
            .iter()
            .map(|r| (r.lambda - m.value).abs())
            .fold(f64::INFINITY, f64::min);
        if best > 1e-6 {
            failure = Some(format!(
                "n={n}: value {:.12e} matches no six-point class (closest off by {best:.3e})",
                m.value
            ));
            break;
        }
        max_match_gap = max_match_gap.max(best);
    }
    check(
        format!("census-gap/{name}-sweep"),
        failure.is_none(),
        failure.unwrap_or_else(|| {
            format!(
                "n={min_n}..=12 certified below the ceiling; reduced supports <= {max_support}; \
                 values match six-point classes to {max_match_gap:.3e}"
            )
        }),
    )
}

/// Every maximal intersecting class on 5, 6 and 7 points is certified, the
/// pair-covering ones other than the complete 5-point graph sit below the
/// ceiling by the pinned gap, and the generated families stay below it for
/// every ground set up to 12 after domination reduction.
pub fn census_gap_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut six: Vec<CensusRecord> = Vec::new();
    for n in [5u32, 6, 7] {
        match classify::census_cached(n) {
            Ok(records) => {
                out.push(census_certified_check("census-gap", n, &records));
                out.push(census_gap_check("census-gap", n, &records));
                if n == 6 {
                    six = records.as_ref().clone();
                }
            }
            Err(e) => {
                out.push(check(
                    format!("census-gap/certified-{n}"),
                    false,
                    format!("census failed: {e}"),
                ));
                out.push(check(
                    format!("census-gap/gap-{n}"),
                    false,
                    format!("census failed: {e}"),
                ));
            }
        }
    }
    out.push(gen_sweep_check("gen_f4", 4, seed, &six));
    out.push(gen_sweep_check("gen_r5", 5, seed, &six));
    out
}

/// Exact structural identities of the small censuses: edge counts on six
/// points, the double-cover class, and the unique seven-point class that
/// covers pairs with unique intersections.
pub fn classification_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    match classify::census_cached(6) {
        Ok(records) => {
            let wrong: Vec<String> = records
                .iter()
                .filter(|r| r.edge_count != 10)
                .map(|r| format!("{} ({} edges)", r.id, r.edge_count))
                .collect();
            out.push(check(
                "classification/six-point-edge-count",
                wrong.is_empty(),
                if wrong.is_empty() {
                    format!("all {} classes have exactly 10 edges", records.len())
                } else {
                    format!("classes off 10 edges: {}", wrong.join("; "))
                },
            ));
            let twice: Vec<&CensusRecord> = records
                .iter()
                .filter(|r| r.pair_profile.iter().all(|&c| c == 2))
                .collect();
            let passed = twice.len() == 1 && twice[0].catalog_match == Some("ff6");
            out.push(check(
                "classification/six-point-double-cover",
                passed,
                format!(
                    "{} class(es) cover every pair exactly twice; catalog match {:?}",
                    twice.len(),
                    twice.first().and_then(|r| r.catalog_match)
                ),
            ));
        }
        Err(e) => {
            for name in ["six-point-edge-count", "six-point-double-cover"] {
                out.push(check(
                    format!("classification/{name}"),
                    false,
                    format!("census failed: {e}"),
                ));
            }
        }
    }
    match classify::census_cached(7) {
        Ok(records) => {
            let picked: Vec<&CensusRecord> = records
                .iter()
                .filter(|r| r.covers_pairs && r.unique_intersections)
                .collect();
            let passed = picked.len() == 1 && picked[0].catalog_match == Some("f7");
            out.push(check(
                "classification/seven-point-unique-record",
                passed,
                format!(
                    "{} class(es) cover pairs with unique intersections; catalog match {:?}",
                    picked.len(),
                    picked.first().and_then(|r| r.catalog_match)
                ),
            ));
        }
        Err(e) => {
            out.push(check(
                "classification/seven-point-unique-record",
                false,
                format!("census failed: {e}"),
            ));
        }
    }
    out
}

/// Edge totals and minimum degrees of the balanced five-part construction
/// match their closed-form counting functions exactly for every ground set
/// up to 500.
pub fn construction_count_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let pinned = [(5u64, 10u64), (6, 16), (11, 104)];
    let wrong: Vec<String> = pinned
        .iter()
        .filter(|&&(n, want)| families::t53_count(n) != want)
        .map(|&(n, want)| format!("t53_count({n}) = {} wants {want}", families::t53_count(n)))
        .collect();
    out.push(check(
        "counts/pinned-values",
        wrong.is_empty(),
        if wrong.is_empty() {
            "t53_count matches 10, 16, 104 at n = 5, 6, 11".to_string()
        } else {
            wrong.join("; ")
        },
    ));

    let mut failure: Option<String> = None;
    for n in 6..=500u32 {
        let g = families::build_turan_t53(n);
        let edges = g.edge_count() as u64;
        let count = families::t53_count(n as u64);
        if edges != count {
            failure = Some(format!("n={n}: built {edges} edges, t53_count says {count}"));
            break;
        }
        let min_deg = g.min_degree().unwrap_or(0);
        let delta = families::delta53_count(n as u64);
        let difference = count - families::t53_count(n as u64 - 1);
        if min_deg != delta || delta != difference {
            failure = Some(format!(
                "n={n}: min degree {min_deg}, delta53_count {delta}, count difference {difference}"
            ));
            break;
        }
    }
    out.push(check(
        "counts/sweep-6-500",
        failure.is_none(),
        failure.unwrap_or_else(|| {
            "edge totals and minimum degrees match the counting functions for n = 6..=500"
                .to_string()
        }),
    ));
    out
}

/// The five-part construction never maps a complete tripartite triple
/// system onto itself homomorphically, nor does any census class; the
/// complete graph on six vertices does.
pub fn freeness_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();

    let hit = (5..=40u32).find(|&n| hom::contains_k333_hom(&families::build_turan_t53(n)));
    out.push(check(
        "freeness/five-part-construction",
        hit.is_none(),
        match hit {
            None => "no homomorphic image for any ground set 5..=40".to_string(),
            Some(n) => format!("ground set {n} admits a homomorphic image"),
        },
    ));

    let mut failure: Option<String> = None;
    'census: for n in [5u32, 6, 7] {
        match classify::census_cached(n) {
            Ok(records) => {
                for r in records.iter() {
                    if hom::contains_k333_hom(&r.graph) {
                        failure = Some(format!("class {} on {n} points admits an image", r.id));
                        break 'census;
                    }
                }
            }
            Err(e) => {
                failure = Some(format!("census on {n} points failed: {e}"));
                break;
            }
        }
    }
    out.push(check(
        "freeness/census-records",
        failure.is_none(),
        failure.unwrap_or_else(|| "no census class admits a homomorphic image".to_string()),
    ));

    let k6 = Hypergraph::complete(6, 3);
    let has = hom::contains_k333_hom(&k6);
    out.push(check(
        "freeness/complete-six",
        has,
        format!("complete 3-graph on six vertices admits an image: {has}"),
    ));
    out
}

fn random_three_graph(rng: &mut ChaCha8Rng, n: u32, p: f64, min_edges: usize) -> Hypergraph {
    loop {
        let edges: Vec<Vec<u32>> =
            (1..=n).combinations(3).filter(|_| rng.gen_bool(p)).collect();
        if edges.len() >= min_edges {
            return Hypergraph::new(n, 3, edges).expect("sampled edges are valid");
        }
    }
}

fn monotone_subfamily_check(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d6f_6e6f);
    let mut worst = f64::NEG_INFINITY;
    let mut failure: Option<String> = None;
    for k in 0..200 {
        let n = rng.gen_range(5..=10u32);
        let p = if rng.gen_bool(0.5) { 0.2 } else { 0.4 };
        let g = random_three_graph(&mut rng, n, p, 2);
        let sub: Vec<Vec<u32>> = loop {
            let picked: Vec<Vec<u32>> =
                g.edges().filter(|_| rng.gen_bool(0.5)).map(<[u32]>::to_vec).collect();
            if !picked.is_empty() {
                break picked;
            }
        };
        let f = Hypergraph::new(n, 3, sub).expect("subfamily edges are valid");
        let opts = Options { seed: seed ^ k, restarts: 60, exhaustive_support: true, ..Options::default() };
        let vg = lagrangian::maximize::<f64>(&g, &opts).value;
        let vf = lagrangian::maximize::<f64>(&f, &opts).value;
        worst = worst.max(vf - vg);
        if vf > vg + MONO_TOL {
            failure = Some(format!(
                "pair {k}: subfamily value {vf:.12e} exceeds its superfamily's {vg:.12e}"
            ));
            break;
        }
    }
    check(
        "properties/monotone-subfamily",
        failure.is_none(),
        failure.unwrap_or_else(|| {
            format!("200 nested pairs; max(sub - super) = {worst:.3e} (tolerance {MONO_TOL:.1e})")
        }),
    )
}

fn blow_up_invariance_check(seed: u64) -> CheckResult {
    let instances: [(&str, Option<u32>); 11] = [
        ("k5_3", None),
        ("k5_3_minus", None),
        ("f7", None),
        ("f6", None),
        ("ff6", None),
        ("t6", None),
        ("star", Some(6)),
        ("gen_k3", Some(6)),
        ("gen_f4", Some(6)),
        ("gen_r5", Some(6)),
        ("t5_3", Some(7)),
    ];
    let mut worst = 0.0f64;
    let mut failure: Option<String> = None;
    'outer: for (name, n) in instances {
        let g = build_graph(name, n);
        let base = maximize_f64(&g, seed).value;
        for t in [2u32, 3] {
            let big = g.blow_up(t).expect("cloning stays within limits");
            let value = maximize_f64(&big, seed).value;
            let dev = (value - base).abs();
            worst = worst.max(dev);
            if dev > BLOWUP_TOL {
                failure = Some(format!(
                    "{name} with {t} clones: value {value:.12e} vs base {base:.12e}"
                ));
                break 'outer;
            }
        }
    }
    check(
        "properties/blow-up-invariance",
        failure.is_none(),
        failure.unwrap_or_else(|| {
            format!("11 catalog instances, 2 and 3 clones; max deviation {worst:.3e}")
        }),
    )
}

fn gradient_check(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6772_6164);
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut failure: Option<String> = None;
    'outer: for k in 0..50 {
        let n = rng.gen_range(5..=10u32);
        let g = random_three_graph(&mut rng, n, 0.3, 1);
        let mut x: Vec<f64> = (0..n)
            .map(|_| -(rng.gen::<f64>().max(1e-12)).ln() + 1e-3)
            .collect();
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
        let grad = lagrangian::poly_grad(&g, &x);
        for i in 0..n as usize {
            let mut xp = x.clone();
            xp[i] += h;
            let mut xm = x.clone();
            xm[i] -= h;
            let fd = (lagrangian::poly_eval(&g, &xp) - lagrangian::poly_eval(&g, &xm)) / (2.0 * h);
            let rel = (fd - grad[i]).abs() / grad[i].abs().max(1.0);
            worst = worst.max(rel);
            if rel > GRAD_REL_TOL {
                failure = Some(format!(
                    "instance {k}, coordinate {}: analytic {:.12e} vs central difference {fd:.12e}",
                    i + 1,
                    grad[i]
                ));
                break 'outer;
            }
        }
    }
    check(
        "properties/gradient-finite-difference",
        failure.is_none(),
        failure.unwrap_or_else(|| {
            format!("50 random instances; max relative deviation {worst:.3e}")
        }),
    )
}

fn shift_roundtrip_check() -> CheckResult {
    let mut total = 0usize;
    let mut failure: Option<String> = None;
    'outer: for n in [5u32, 6, 7] {
        let records = match classify::census_cached(n) {
            Ok(r) => r,
            Err(e) => {
                failure = Some(format!("census on {n} points failed: {e}"));
                break;
            }
        };
        for r in records.iter() {
            let family = r.graph.to_set_family();
            let trace = match shifting::shift_terminal(&family) {
                Ok(t) => t,
                Err(e) => {
                    failure = Some(format!("class {}: shrinking failed: {e}", r.id));
                    break 'outer;
                }
            };
            if !shifting::has_unique_intersections(&trace.result) {
                failure = Some(format!("class {}: terminal lacks unique intersections", r.id));
                break 'outer;
            }
            if !trace.result.is_antichain() {
                failure = Some(format!("class {}: terminal is not an antichain", r.id));
                break 'outer;
            }
            match shifting::generation_roundtrip(&r.graph) {
                Ok(true) => {}
                Ok(false) => {
                    failure = Some(format!("class {}: terminal does not regenerate it", r.id));
                    break 'outer;
                }
                Err(e) => {
                    failure = Some(format!("class {}: roundtrip failed: {e}", r.id));
                    break 'outer;
                }
            }
            total += 1;
        }
    }
    check(
        "properties/shift-roundtrip",
        failure.is_none(),
        failure.unwrap_or_else(|| {
            format!(
                "{total} census classes: terminals have unique intersections, are antichains, \
                 and regenerate their classes"
            )
        }),
    )
}

fn symmetrization_audit_check(seed: u64) -> CheckResult {
    let failures: Vec<String> = (0..200u64)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7379_6d6d ^ (k.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
            let n = rng.gen_range(10..=40u32);
            let keep = [0.5, 0.8, 1.0][rng.gen_range(0..3usize)];
            let base = families::build_turan_t53(n);
            let edges: Vec<Vec<u32>> = base
                .edges()
                .filter(|_| keep >= 1.0 || rng.gen_bool(keep))
                .map(<[u32]>::to_vec)
                .collect();
            if edges.is_empty() {
                return None;
            }
            let g = Hypergraph::new(n, 3, edges).expect("subgraph edges are valid");
            let mut perm: Vec<u32> = (1..=n).collect();
            perm.shuffle(&mut rng);
            let g = g.permuted(&perm).expect("permutation is valid");
            let order = if k % 2 == 0 {
                ChoiceOrder::Deterministic
            } else {
                ChoiceOrder::Random { seed: rng.gen() }
            };
            let log = match symmetrize::symmetrize_with(&g, 0.02, order) {
                Ok(log) => log,
                Err(e) => return Some(format!("input {k}: run failed: {e}")),
            };
            let audit = symmetrize::audit_properties(&log);
            if audit.passed {
                None
            } else {
                let bad: Vec<&str> = audit
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                Some(format!("input {k}: failed audit checks: {}", bad.join(", ")))
            }
        })
        .collect();
    check(
        "properties/symmetrization-audit",
        failures.is_empty(),
        if failures.is_empty() {
            "200 randomized inputs (half with randomized choices) pass every audit check"
                .to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn partition_score_check(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7061_7274);
    let mut failure: Option<String> = None;
    for k in 0..1000 {
        let n = rng.gen_range(5..=20u32);
        let edges: Vec<Vec<u32>> =
            (1..=n).combinations(3).filter(|_| rng.gen_bool(0.3)).collect();
        let g = Hypergraph::new(n, 3, edges).expect("sampled edges are valid");
        let assignment: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=5u8)).collect();
        let parts = FivePartition::new(n, &assignment).expect("assignment is valid");
        let score = symmetrize::edge_goodness(&g, &parts);
        if score.sigma != score.classified_sigma() {
            failure = Some(format!(
                "instance {k}: score {} vs classification count {}",
                score.sigma,
                score.classified_sigma()
            ));
            break;
        }
    }
    check(
        "properties/partition-score-identity",
        failure.is_none(),
        failure.unwrap_or_else(|| {
            "1000 random partitioned graphs: the cut score equals bad + 2 * very-bad".to_string()
        }),
    )
}

/// Randomized cross-checks: monotonicity of the maximum under subfamily
/// inclusion, invariance under vertex cloning, analytic gradients against
/// finite differences, shrinking round-trips on every census class, full
/// audits of randomized symmetrization runs, and the partition score
/// identity.
pub fn property_suite(seed: u64) -> Vec<CheckResult> {
    vec![
        monotone_subfamily_check(seed),
        blow_up_invariance_check(seed),
        gradient_check(seed),
        shift_roundtrip_check(),
        symmetrization_audit_check(seed),
        partition_score_check(seed),
    ]
}

/// Runs the quick suite twice in-process and demands byte-identical JSON.
pub fn reproducibility_check(seed: u64) -> CheckResult {
    let first = serde_json::to_string(&make_report(
        "verify-all",
        serde_json::json!({ "quick": true }),
        seed,
        quick_suite(seed),
    ))
    .expect("report serializes");
    let second = serde_json::to_string(&make_report(
        "verify-all",
        serde_json::json!({ "quick": true }),
        seed,
        quick_suite(seed),
    ))
    .expect("report serializes");
    let identical = first == second;
    check(
        "reproducibility/in-process-double-run",
        identical,
        if identical {
            format!("two runs produced identical {}-byte reports", first.len())
        } else {
            "consecutive reports differ".to_string()
        },
    )
}

/// Catalog families at their reference instances against their recorded
/// values, plus certification and gap checks on the 5- and 6-point
/// censuses. Everything here is expected to pass.
pub fn quick_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for entry in families::catalog() {
        let form = match entry.expected {
            Expected::None => continue,
            Expected::Exact(f) | Expected::UpperBound(f) => f,
        };
        let n = entry.takes_n.map(|_| entry.reference_n.expect("reference instance"));
        let r = entry.takes_r.map(|_| entry.reference_r.expect("reference instance"));
        let g = families::build(entry.name, n, r)
            .expect("reference instance builds")
            .into_graph();
        let target = form.eval(Some(g.n())).expect("form evaluates");
        let name = format!("reference/{}", entry.name);
        out.push(match entry.expected {
            Expected::Exact(_) => exact_value_check(name, &g, target, seed),
            Expected::UpperBound(_) => bound_value_check(name, &g, target, seed),
            Expected::None => unreachable!(),
        });
    }
    for n in [5u32, 6] {
        match classify::census_cached(n) {
            Ok(records) => {
                out.push(census_certified_check("census-quick", n, &records));
                out.push(census_gap_check("census-quick", n, &records));
            }
            Err(e) => {
                out.push(check(
                    format!("census-quick/certified-{n}"),
                    false,
                    format!("census failed: {e}"),
                ));
                out.push(check(
                    format!("census-quick/gap-{n}"),
                    false,
                    format!("census failed: {e}"),
                ));
            }
        }
    }
    out
}

/// Every suite in order; the union the command-line `verify-all` runs.
pub fn full_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = closed_form_suite(seed);
    out.extend(census_gap_suite(seed));
    out.extend(classification_suite());
    out.extend(construction_count_suite());
    out.extend(freeness_suite());
    out.extend(property_suite(seed));
    out.push(reproducibility_check(seed));
    out
}
