//! Exhaustive classification of maximal intersecting 3-graphs on small
//! ground sets.
//!
//! Triples of `[n]` form a compatibility graph (adjacent when they share a
//! vertex); maximal intersecting families are exactly its maximal cliques.
//! The census enumerates them with Bron–Kerbosch, groups them up to
//! relabeling, and decorates each class with coverage data, a certified
//! maximum of the edge-product polynomial, and the catalog family it
//! matches after dropping isolated vertices.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use itertools::Itertools;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::canon;
use crate::families;
use crate::hypergraph::Hypergraph;
use crate::io;
use crate::lagrangian::{self, Options};
use crate::shifting;

/// Largest ground set enumerated without an explicit budget.
pub const CENSUS_DEFAULT_MAX_N: u32 = 7;
/// Largest ground set the census supports at all.
pub const CENSUS_HARD_MAX_N: u32 = 8;

/// Errors from the census.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("census supports ground sets 3..={max}, got {n}", max = CENSUS_HARD_MAX_N)]
    BadGroundSet { n: u32 },
    #[error("ground set {n} needs an explicit time budget (pass one to opt in)")]
    BudgetRequired { n: u32 },
    #[error("census ran out of its {budget:?} budget after {done} cliques")]
    BudgetExceeded { budget: Duration, done: usize },
}

/// One isomorphism class of maximal intersecting families.
#[derive(Debug, Clone)]
pub struct CensusRecord {
    /// Canonical representative.
    pub graph: Hypergraph,
    /// Short content digest of the canonical representative.
    pub id: String,
    pub edge_count: usize,
    /// Number of labeled families in the class.
    pub labeled_copies: u64,
    /// Every pair of the full ground set (isolated vertices included) lies
    /// in some edge.
    pub covers_pairs: bool,
    /// Every element of every edge is the whole intersection with some edge.
    pub unique_intersections: bool,
    /// Sorted per-pair coverage counts over the full ground set.
    pub pair_profile: Vec<u64>,
    /// Certified maximum of the edge-product polynomial.
    pub lambda: f64,
    pub lambda_certified: bool,
    /// Distance below the intersecting-family ceiling: `2/25 - lambda`.
    pub gap: f64,
    /// Catalog family equal to this class once isolated vertices are
    /// dropped (first match in catalog order).
    pub catalog_match: Option<&'static str>,
}

/// Census with the default budget policy: ground sets up to
/// [`CENSUS_DEFAULT_MAX_N`] run unbudgeted.
pub fn census(n: u32) -> Result<Vec<CensusRecord>, CensusError> {
    if n > CENSUS_DEFAULT_MAX_N && n <= CENSUS_HARD_MAX_N {
        return Err(CensusError::BudgetRequired { n });
    }
    census_with_budget(n, None)
}

/// Like [`census`], but memoizes results for the unbudgeted range so
/// repeated callers (verification suites, the command-line tool) pay
/// for each ground set at most once per process.
pub fn census_cached(n: u32) -> Result<Arc<Vec<CensusRecord>>, CensusError> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<CensusRecord>>>>> = OnceLock::new();
    if n > CENSUS_DEFAULT_MAX_N {
        return census(n).map(Arc::new);
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("census cache lock").get(&n) {
        return Ok(Arc::clone(hit));
    }
    // Compute outside the lock: a census can take seconds and other
    // ground sets should not wait on it.
    let records = Arc::new(census(n)?);
    let mut guard = cache.lock().expect("census cache lock");
    let entry = guard.entry(n).or_insert_with(|| Arc::clone(&records));
    Ok(Arc::clone(entry))
}

/// Census with an optional wall-clock budget (required above
/// [`CENSUS_DEFAULT_MAX_N`]).
pub fn census_with_budget(
    n: u32,
    budget: Option<Duration>,
) -> Result<Vec<CensusRecord>, CensusError> {
    if !(3..=CENSUS_HARD_MAX_N).contains(&n) {
        return Err(CensusError::BadGroundSet { n });
    }
    if n > CENSUS_DEFAULT_MAX_N && budget.is_none() {
        return Err(CensusError::BudgetRequired { n });
    }
    let started = Instant::now();
    let cliques = maximal_intersecting_masks(n, started, budget)?;

    // Group labeled families into isomorphism classes.
    let triples: Vec<Vec<u32>> = (1..=n).combinations(3).collect();
    struct Class {
        graph: Hypergraph,
        labeled: u64,
    }
    let mut classes: HashMap<String, Class> = HashMap::new();
    for (done, &mask) in cliques.iter().enumerate() {
        if let Some(budget) = budget {
            if started.elapsed() > budget {
                return Err(CensusError::BudgetExceeded { budget, done });
            }
        }
        let edges: Vec<Vec<u32>> = (0..triples.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| triples[i].clone())
            .collect();
        let graph = Hypergraph::new(n, 3, edges).expect("triples are valid edges");
        debug_assert_eq!(graph.is_maximal_intersecting(), Ok(true));
        let canonical = canon::canonical_form(&graph).expect("small graphs canonicalize");
        let key = io::serialize_hypergraph(&canonical.graph);
        classes
            .entry(key)
            .or_insert_with(|| Class { graph: canonical.graph, labeled: 0 })
            .labeled += 1;
    }

    let matches = catalog_candidates(n);
    let opts = Options { restarts: 48, exhaustive_support: true, seed: 1, ..Options::default() };
    let mut records: Vec<CensusRecord> = classes
        .into_iter()
        .map(|(key, class)| {
            let graph = class.graph;
            let all: Vec<u32> = (1..=n).collect();
            let maximum: lagrangian::Maximum<f64> = lagrangian::maximize(&graph, &opts);
            let stripped = graph.strip_isolated();
            let catalog_match = canon::canonical_form(&stripped)
                .ok()
                .and_then(|c| matches.get(&io::serialize_hypergraph(&c.graph)).copied());
            let digest = Sha256::digest(key.as_bytes());
            CensusRecord {
                id: hex::encode(&digest[..8]),
                edge_count: graph.edge_count(),
                labeled_copies: class.labeled,
                covers_pairs: graph.covers_pairs(&all),
                unique_intersections: shifting::has_unique_intersections(
                    &graph.to_set_family(),
                ),
                pair_profile: graph.pair_coverage_profile(),
                lambda: maximum.value,
                lambda_certified: maximum.certified,
                gap: 0.08 - maximum.value,
                catalog_match,
                graph,
            }
        })
        .collect();
    records.sort_by(|a, b| {
        (a.edge_count, a.graph.edges_vec()).cmp(&(b.edge_count, b.graph.edges_vec()))
    });
    Ok(records)
}

/// All maximal intersecting families on `[n]` as bitmasks over the lex
/// list of triples.
fn maximal_intersecting_masks(
    n: u32,
    started: Instant,
    budget: Option<Duration>,
) -> Result<Vec<u64>, CensusError> {
    let triples: Vec<Vec<u32>> = (1..=n).combinations(3).collect();
    let t = triples.len();
    assert!(t <= 64, "triple list must fit a 64-bit mask");
    let vertex_masks: Vec<u32> = triples
        .iter()
        .map(|tr| tr.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let adjacency: Vec<u64> = (0..t)
        .map(|i| {
            let mut mask = 0u64;
            for j in 0..t {
                if i != j && vertex_masks[i] & vertex_masks[j] != 0 {
                    mask |= 1 << j;
                }
            }
            mask
        })
        .collect();
    let full = if t == 64 { !0u64 } else { (1u64 << t) - 1 };
    let mut out = Vec::new();
    let mut nodes = 0u64;
    bron_kerbosch(0, full, 0, &adjacency, &mut out, &mut nodes, started, budget)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn bron_kerbosch(
    clique: u64,
    mut candidates: u64,
    mut excluded: u64,
    adjacency: &[u64],
    out: &mut Vec<u64>,
    nodes: &mut u64,
    started: Instant,
    budget: Option<Duration>,
) -> Result<(), CensusError> {
    *nodes += 1;
    if *nodes % 4096 == 0 {
        if let Some(budget) = budget {
            if started.elapsed() > budget {
                return Err(CensusError::BudgetExceeded { budget, done: out.len() });
            }
        }
    }
    if candidates == 0 && excluded == 0 {
        out.push(clique);
        return Ok(());
    }
    // Pivot on the vertex covering the most candidates.
    let mut pivot = usize::MAX;
    let mut best = 0u32;
    let mut scan = candidates | excluded;
    while scan != 0 {
        let u = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        let coverage = (candidates & adjacency[u]).count_ones();
        if pivot == usize::MAX || coverage > best {
            pivot = u;
            best = coverage;
        }
    }
    let mut branch = candidates & !adjacency[pivot];
    while branch != 0 {
        let v = branch.trailing_zeros() as usize;
        let bit = 1u64 << v;
        branch &= branch - 1;
        bron_kerbosch(
            clique | bit,
            candidates & adjacency[v],
            excluded & adjacency[v],
            adjacency,
            out,
            nodes,
            started,
            budget,
        )?;
        candidates &= !bit;
        excluded |= bit;
    }
    Ok(())
}

/// Canonical serializations of catalog families that could appear as a
/// census class with its isolated vertices dropped, mapped to their names.
fn catalog_candidates(max_n: u32) -> HashMap<String, &'static str> {
    let mut map: HashMap<String, &'static str> = HashMap::new();
    let mut add = |graph: Hypergraph, name: &'static str| {
        if graph.n() <= max_n {
            if let Ok(c) = canon::canonical_form(&graph) {
                map.entry(io::serialize_hypergraph(&c.graph)).or_insert(name);
            }
        }
    };
    add(Hypergraph::complete(5, 3), "k5_3");
    add(families::fano(), "f7");
    add(families::one_three_split(), "f6");
    add(families::double_cover_six(), "ff6");
    for n in 3..=max_n {
        add(
            families::build("star", Some(n), None).expect("valid").into_graph(),
            "star",
        );
        add(
            families::build("gen_k3", Some(n), None).expect("valid").into_graph(),
            "gen_k3",
        );
        if n >= 4 {
            add(
                families::build("gen_f4", Some(n), None).expect("valid").into_graph(),
                "gen_f4",
            );
        }
        if n >= 5 {
            add(
                families::build("gen_r5", Some(n), None).expect("valid").into_graph(),
                "gen_r5",
            );
        }
    }
    map
}

/// CSV rendering of census records (one row per class).
pub fn census_csv(records: &[CensusRecord]) -> String {
    let mut out = String::from("canonical-id,edges,pair-profile,lambda,gap,catalog-match\n");
    for r in records {
        let profile = r.pair_profile.iter().map(|c| c.to_string()).join("+");
        out.push_str(&format!(
            "{},{},{},{:.12},{:.6e},{}\n",
            r.id,
            r.edge_count,
            profile,
            r.lambda,
            r.gap,
            r.catalog_match.unwrap_or("")
        ));
    }
    out
}
