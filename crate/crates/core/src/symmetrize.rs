//! Symmetrization of 3-graphs: alternately delete low-degree vertices
//! (cleaning) and merge vertex classes that share no edge (merging) until
//! nothing changes, over a "pointed partitioned" state — a partition of the
//! live vertices with one marked representative per part. The end state is a
//! blow-up of its core, which is what makes the process useful.
//!
//! The module also houses the reversal-side helpers: scoring a 5-block
//! partition by how far edges stray from being transversal, picking the best
//! block for a moved set, flagging vertices with too many non-transversal
//! incidences, and peeling minimum-degree vertices against the extremal
//! degree schedule.
//!
//! Every "arbitrary" choice in the process is resolved to the smallest index
//! by default; a seeded random order exercises order-independence of the
//! audited invariants.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::families;
use crate::hom;
use crate::hypergraph::Hypergraph;

/// Largest ground set the process accepts (edge masks use 128-bit words).
pub const SYMMETRIZE_MAX_N: u32 = 128;

/// Errors from building a process state.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetrizeError {
    #[error("symmetrization needs a 3-uniform graph, got r = {r}")]
    NotThreeUniform { r: u32 },
    #[error("symmetrization supports at most {max} vertices, got {n}", max = SYMMETRIZE_MAX_N)]
    TooManyVertices { n: u32 },
    #[error("invalid state: {0}")]
    InvalidState(String),
}

/// How the process resolves its free choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChoiceOrder {
    /// Always the smallest index / lexicographically first option.
    Deterministic,
    /// Uniform among the qualifying options, drawn from a seeded generator.
    Random { seed: u64 },
}

enum Chooser {
    First,
    Rng(Box<ChaCha8Rng>),
}

impl Chooser {
    fn new(order: ChoiceOrder) -> Self {
        match order {
            ChoiceOrder::Deterministic => Chooser::First,
            ChoiceOrder::Random { seed } => Chooser::Rng(Box::new(ChaCha8Rng::seed_from_u64(seed))),
        }
    }

    fn pick<T: Copy>(&mut self, options: &[T]) -> T {
        assert!(!options.is_empty(), "chooser needs at least one option");
        match self {
            Chooser::First => options[0],
            Chooser::Rng(rng) => options[rng.gen_range(0..options.len())],
        }
    }
}

/// A 3-graph together with a partition of its live vertices and one marked
/// representative per part. The ground set never changes; deleted vertices
/// simply become isolated and leave the live set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedPartitionedHypergraph {
    graph: Hypergraph,
    alive: BTreeSet<u32>,
    /// Representative -> its part. Keys are exactly the marked vertices.
    parts: BTreeMap<u32, BTreeSet<u32>>,
}

impl PointedPartitionedHypergraph {
    /// Initial state: every vertex live, in its own singleton part, marked.
    pub fn initial(graph: &Hypergraph) -> Result<Self, SymmetrizeError> {
        if graph.r() != 3 {
            return Err(SymmetrizeError::NotThreeUniform { r: graph.r() });
        }
        if graph.n() > SYMMETRIZE_MAX_N {
            return Err(SymmetrizeError::TooManyVertices { n: graph.n() });
        }
        let alive: BTreeSet<u32> = (1..=graph.n()).collect();
        let parts = alive.iter().map(|&v| (v, BTreeSet::from([v]))).collect();
        Ok(Self { graph: graph.clone(), alive, parts })
    }

    /// State with a caller-supplied partition; each entry maps a marked
    /// vertex to its part. Parts must be disjoint, cover all edge vertices,
    /// and contain their representative.
    pub fn with_parts(
        graph: &Hypergraph,
        parts: impl IntoIterator<Item = (u32, Vec<u32>)>,
    ) -> Result<Self, SymmetrizeError> {
        if graph.r() != 3 {
            return Err(SymmetrizeError::NotThreeUniform { r: graph.r() });
        }
        if graph.n() > SYMMETRIZE_MAX_N {
            return Err(SymmetrizeError::TooManyVertices { n: graph.n() });
        }
        let mut map = BTreeMap::new();
        let mut alive = BTreeSet::new();
        for (rep, members) in parts {
            let set: BTreeSet<u32> = members.into_iter().collect();
            if !set.contains(&rep) {
                return Err(SymmetrizeError::InvalidState(format!(
                    "marked vertex {rep} is not in its own part"
                )));
            }
            for &v in &set {
                if v < 1 || v > graph.n() {
                    return Err(SymmetrizeError::InvalidState(format!(
                        "vertex {v} outside 1..={}",
                        graph.n()
                    )));
                }
                if !alive.insert(v) {
                    return Err(SymmetrizeError::InvalidState(format!(
                        "vertex {v} appears in two parts"
                    )));
                }
            }
            map.insert(rep, set);
        }
        let state = Self { graph: graph.clone(), alive, parts: map };
        state.validate().map_err(SymmetrizeError::InvalidState)?;
        Ok(state)
    }

    /// The current graph, on the original ground set.
    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    /// Live vertices, ascending.
    pub fn alive(&self) -> &BTreeSet<u32> {
        &self.alive
    }

    /// Number of live vertices.
    pub fn live_count(&self) -> usize {
        self.alive.len()
    }

    /// The marked vertices (one per part), ascending.
    pub fn points(&self) -> Vec<u32> {
        self.parts.keys().copied().collect()
    }

    /// Representative -> part map.
    pub fn parts(&self) -> &BTreeMap<u32, BTreeSet<u32>> {
        &self.parts
    }

    /// The representative and part containing `v`, if `v` is live.
    pub fn part_of(&self, v: u32) -> Option<(u32, &BTreeSet<u32>)> {
        self.parts.iter().find(|(_, p)| p.contains(&v)).map(|(&r, p)| (r, p))
    }

    /// Minimum degree over live vertices; `None` when nothing is live.
    pub fn min_live_degree(&self) -> Option<u64> {
        self.alive.iter().map(|&v| self.graph.degree(v)).min()
    }

    /// Structural soundness: parts partition the live set, representatives
    /// belong to their parts, and all edges run inside the live set.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        for (&rep, part) in &self.parts {
            if !part.contains(&rep) {
                return Err(format!("marked vertex {rep} missing from its part"));
            }
            for &v in part {
                if !seen.insert(v) {
                    return Err(format!("vertex {v} in two parts"));
                }
            }
        }
        if seen != self.alive {
            return Err("parts do not partition the live set".into());
        }
        for e in self.graph.edges() {
            if let Some(&v) = e.iter().find(|v| !self.alive.contains(v)) {
                return Err(format!("edge {e:?} touches the deleted vertex {v}"));
            }
        }
        Ok(())
    }

    /// Removes one vertex: edges through it go away, its part shrinks, and a
    /// marked vertex may only leave together with its whole (singleton) part.
    fn delete_vertex(&mut self, v: u32) {
        let (rep, part) = self.part_of(v).expect("deleting a live vertex");
        if rep == v {
            assert_eq!(part.len(), 1, "a marked vertex is deleted only when its part is a singleton");
            self.parts.remove(&v);
        } else {
            self.parts.get_mut(&rep).expect("part exists").remove(&v);
        }
        self.alive.remove(&v);
        let edges: Vec<Vec<u32>> = self
            .graph
            .edges()
            .filter(|e| !e.contains(&v))
            .map(|e| e.to_vec())
            .collect();
        self.graph =
            Hypergraph::new(self.graph.n(), self.graph.r(), edges).expect("filtered edges stay valid");
    }

    /// Replaces the edge set with the blow-up of the core (the restriction
    /// to the marked vertices) onto the parts.
    fn rebuild_as_blow_up(&mut self) {
        let points = self.points();
        let core = self
            .graph
            .restrict_keep_labels(&points)
            .expect("marked vertices are in range");
        let mut edges = Vec::new();
        for e in core.edges() {
            for &a in &self.parts[&e[0]] {
                for &b in &self.parts[&e[1]] {
                    for &c in &self.parts[&e[2]] {
                        edges.push(vec![a, b, c]);
                    }
                }
            }
        }
        self.graph =
            Hypergraph::new(self.graph.n(), self.graph.r(), edges).expect("blow-up edges stay valid");
    }
}

/// The degree bound driving cleaning: `(6/25 − alpha) · n²` at `n` live
/// vertices.
pub fn default_bound(alpha: f64) -> impl Fn(usize) -> f64 + Copy {
    move |n| (6.0 / 25.0 - alpha) * (n as f64) * (n as f64)
}

/// One vertex deletion during cleaning.
#[derive(Debug, Clone, Serialize)]
pub struct CleanEvent {
    /// The low-degree vertex that triggered the deletion.
    pub trigger: u32,
    /// The vertex actually deleted (a non-marked member of the trigger's
    /// part, or the trigger itself when its part is a singleton).
    pub vertex: u32,
    /// Degree of the deleted vertex at deletion time.
    pub degree: u64,
    /// The bound the trigger's degree fell below.
    pub bound: f64,
    /// Live vertices before the deletion.
    pub live_before: usize,
}

/// One part absorption during merging.
#[derive(Debug, Clone, Serialize)]
pub struct MergeEvent {
    /// Marked vertex whose part absorbs the other.
    pub absorber: u32,
    /// Marked vertex whose part is absorbed (leaves the marked set).
    pub absorbed: u32,
    pub absorber_degree: u64,
    pub absorbed_degree: u64,
    /// Size of the absorbed part at merge time.
    pub absorbed_part_size: usize,
    pub edges_before: usize,
    pub edges_after: usize,
}

/// Plain, serializable copy of one process state. `parts[k]` is the part of
/// `points[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub n: u32,
    pub alive: Vec<u32>,
    pub points: Vec<u32>,
    pub parts: Vec<Vec<u32>>,
    pub edges: Vec<Vec<u32>>,
}

impl Snapshot {
    fn of(state: &PointedPartitionedHypergraph) -> Self {
        Self {
            n: state.graph.n(),
            alive: state.alive.iter().copied().collect(),
            points: state.points(),
            parts: state.parts.values().map(|p| p.iter().copied().collect()).collect(),
            edges: state.graph.edges_vec(),
        }
    }

    /// Rebuilds the graph on the original ground set.
    pub fn graph(&self) -> Hypergraph {
        Hypergraph::new(self.n, 3, self.edges.clone()).expect("snapshot edges stay valid")
    }
}

/// One cleaning-then-merging round of the process.
#[derive(Debug, Clone, Serialize)]
pub struct Round {
    /// Round number, starting from 1.
    pub index: usize,
    pub cleanings: Vec<CleanEvent>,
    /// State after cleaning reached its fixed point.
    pub after_cleaning: Snapshot,
    pub merge: Option<MergeEvent>,
    /// State after the (at most one) merge of the round.
    pub after_merging: Snapshot,
}

/// Full record of a symmetrization run.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetrizationLog {
    pub alpha: f64,
    pub order: ChoiceOrder,
    pub initial: Snapshot,
    pub rounds: Vec<Round>,
}

impl SymmetrizationLog {
    /// The state the process stopped in.
    pub fn final_snapshot(&self) -> &Snapshot {
        self.rounds.last().map(|r| &r.after_merging).unwrap_or(&self.initial)
    }

    /// All states in process order: initial, then each round's post-cleaning
    /// and post-merging snapshots.
    pub fn snapshots(&self) -> Vec<&Snapshot> {
        let mut out = vec![&self.initial];
        for r in &self.rounds {
            out.push(&r.after_cleaning);
            out.push(&r.after_merging);
        }
        out
    }
}

/// Deletes below-bound vertices until every live vertex meets the bound for
/// the current live count (or nothing is live). Victims resolve to the
/// smallest qualifying index. Returns the deletions in order.
pub fn cleaning(
    state: &mut PointedPartitionedHypergraph,
    bound: impl Fn(usize) -> f64,
) -> Vec<CleanEvent> {
    cleaning_impl(state, &bound, &mut Chooser::First)
}

fn cleaning_impl(
    state: &mut PointedPartitionedHypergraph,
    bound: &impl Fn(usize) -> f64,
    chooser: &mut Chooser,
) -> Vec<CleanEvent> {
    let mut events = Vec::new();
    loop {
        let live = state.live_count();
        if live == 0 {
            break;
        }
        let b = bound(live);
        let low: Vec<u32> = state
            .alive
            .iter()
            .copied()
            .filter(|&v| (state.graph.degree(v) as f64) < b)
            .collect();
        if low.is_empty() {
            break;
        }
        let trigger = chooser.pick(&low);
        let (rep, part) = state.part_of(trigger).expect("trigger is live");
        let victim = if part.len() == 1 {
            trigger
        } else {
            let unmarked: Vec<u32> = part.iter().copied().filter(|&w| w != rep).collect();
            chooser.pick(&unmarked)
        };
        events.push(CleanEvent {
            trigger,
            vertex: victim,
            degree: state.graph.degree(victim),
            bound: b,
            live_before: live,
        });
        state.delete_vertex(victim);
    }
    events
}

/// Merges one pair of parts whose live vertices span no common edge, if any:
/// the part of the lower-degree marked vertex is absorbed into the part of
/// the higher-degree one (ties keep the smaller index), and the edge set is
/// rebuilt as the blow-up of the core onto the enlarged parts. Returns the
/// merge performed, or `None` at a fixed point.
pub fn merging(state: &mut PointedPartitionedHypergraph) -> Option<MergeEvent> {
    merging_impl(state, &mut Chooser::First)
}

fn merging_impl(
    state: &mut PointedPartitionedHypergraph,
    chooser: &mut Chooser,
) -> Option<MergeEvent> {
    let points = state.points();
    if points.len() < 2 {
        return None;
    }
    let masks = state.graph.edge_masks();
    let part_mask: BTreeMap<u32, u128> = state
        .parts
        .iter()
        .map(|(&rep, part)| (rep, part.iter().fold(0u128, |m, &v| m | (1u128 << (v - 1)))))
        .collect();
    let mut qualifying = Vec::new();
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let pa = part_mask[&a];
            let pb = part_mask[&b];
            if !masks.iter().any(|&m| m & pa != 0 && m & pb != 0) {
                qualifying.push((a, b));
            }
        }
    }
    if qualifying.is_empty() {
        return None;
    }
    let (a, b) = chooser.pick(&qualifying);
    let (da, db) = (state.graph.degree(a), state.graph.degree(b));
    let (absorber, absorbed) = if da > db {
        (a, b)
    } else if db > da {
        (b, a)
    } else {
        match chooser {
            Chooser::First => (a, b),
            Chooser::Rng(_) => {
                let flipped = chooser.pick(&[false, true]);
                if flipped {
                    (b, a)
                } else {
                    (a, b)
                }
            }
        }
    };
    let (absorber_degree, absorbed_degree) = if absorber == a { (da, db) } else { (db, da) };
    let edges_before = state.graph.edge_count();
    let moved = state.parts.remove(&absorbed).expect("absorbed part exists");
    let absorbed_part_size = moved.len();
    state.parts.get_mut(&absorber).expect("absorber part exists").extend(moved);
    state.rebuild_as_blow_up();
    Some(MergeEvent {
        absorber,
        absorbed,
        absorber_degree,
        absorbed_degree,
        absorbed_part_size,
        edges_before,
        edges_after: state.graph.edge_count(),
    })
}

/// Runs cleaning then merging from the all-singleton state until a full
/// round changes nothing, with smallest-index choices.
pub fn symmetrize(g: &Hypergraph, alpha: f64) -> Result<SymmetrizationLog, SymmetrizeError> {
    symmetrize_with(g, alpha, ChoiceOrder::Deterministic)
}

/// As [`symmetrize`], with an explicit choice order.
pub fn symmetrize_with(
    g: &Hypergraph,
    alpha: f64,
    order: ChoiceOrder,
) -> Result<SymmetrizationLog, SymmetrizeError> {
    let mut state = PointedPartitionedHypergraph::initial(g)?;
    let mut chooser = Chooser::new(order);
    let bound = default_bound(alpha);
    let mut log = SymmetrizationLog {
        alpha,
        order,
        initial: Snapshot::of(&state),
        rounds: Vec::new(),
    };
    // Every recorded round deletes a vertex or removes a marked vertex, so
    // 2n + 1 rounds cannot happen.
    let limit = 2 * g.n() as usize + 1;
    for index in 1..=limit {
        let before = state.clone();
        let cleanings = cleaning_impl(&mut state, &bound, &mut chooser);
        let after_cleaning = Snapshot::of(&state);
        let merge = merging_impl(&mut state, &mut chooser);
        let after_merging = Snapshot::of(&state);
        if state == before {
            assert!(cleanings.is_empty() && merge.is_none(), "an idle round must do nothing");
            return Ok(log);
        }
        log.rounds.push(Round { index, cleanings, after_cleaning, merge, after_merging });
    }
    unreachable!("symmetrization exceeded {limit} rounds; it must shrink every round");
}

/// One invariant checked over a run.
#[derive(Debug, Clone, Serialize)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

/// Outcome of auditing a full run.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
    pub passed: bool,
}

fn push_check(checks: &mut Vec<AuditCheck>, name: &str, failure: Option<String>) {
    checks.push(AuditCheck {
        name: name.into(),
        passed: failure.is_none(),
        details: failure.unwrap_or_else(|| "ok".into()),
    });
}

/// Verifies the structural invariants of a run:
///
/// * every snapshot's parts partition its live set, with the marked vertex
///   inside its part (and, historically, each earlier partition restricted
///   to the current live set is still pointed by the earlier marks);
/// * restricting any snapshot to its marked set gives the original graph's
///   restriction — merging only copies, never invents, core edges;
/// * edges meet every part at most once, and each snapshot is exactly the
///   blow-up of its core onto its parts;
/// * live and marked sets only shrink, strictly per recorded round;
/// * cleaning stops exactly when the degree bound is met;
/// * each merge satisfies the exact edge-count identity
///   `after = before + (deg(absorber) − deg(absorbed)) · |absorbed part|`,
///   so merging never loses edges;
/// * a merged-away part that still meets the final live set forces the
///   absorbing part to meet it too;
/// * when the input has no homomorphic image of the three-part triple
///   system, no intermediate state acquires one.
pub fn audit_properties(log: &SymmetrizationLog) -> AuditReport {
    let mut checks = Vec::new();
    let snaps = log.snapshots();

    // Partition structure, per snapshot.
    let mut failure = None;
    'structure: for (k, s) in snaps.iter().enumerate() {
        if s.points.len() != s.parts.len() {
            failure = Some(format!("snapshot {k}: {} marks for {} parts", s.points.len(), s.parts.len()));
            break;
        }
        let mut seen = BTreeSet::new();
        for (rep, part) in s.points.iter().zip(&s.parts) {
            if !part.contains(rep) {
                failure = Some(format!("snapshot {k}: mark {rep} outside its part"));
                break 'structure;
            }
            for &v in part {
                if !seen.insert(v) {
                    failure = Some(format!("snapshot {k}: vertex {v} in two parts"));
                    break 'structure;
                }
            }
        }
        let alive: BTreeSet<u32> = s.alive.iter().copied().collect();
        if seen != alive {
            failure = Some(format!("snapshot {k}: parts do not partition the live set"));
            break;
        }
        if let Some(e) = s.edges.iter().find(|e| e.iter().any(|v| !alive.contains(v))) {
            failure = Some(format!("snapshot {k}: edge {e:?} leaves the live set"));
            break;
        }
    }
    push_check(&mut checks, "partition-structure", failure);

    // Historic pointedness: each earlier partition, cut to the current live
    // set, keeps exactly one earlier mark in every surviving piece.
    let mut failure = None;
    'historic: for (i, si) in snaps.iter().enumerate() {
        let alive_i: BTreeSet<u32> = si.alive.iter().copied().collect();
        for (j, sj) in snaps.iter().enumerate().take(i + 1) {
            for (rep, part) in sj.points.iter().zip(&sj.parts) {
                let surviving = part.iter().filter(|v| alive_i.contains(v)).count();
                let rep_alive = alive_i.contains(rep);
                if rep_alive && surviving == 0 {
                    failure = Some(format!(
                        "snapshot {i}: mark {rep} of snapshot {j} alive in an empty piece"
                    ));
                    break 'historic;
                }
                if !rep_alive && surviving > 0 {
                    failure = Some(format!(
                        "snapshot {i}: part of mark {rep} from snapshot {j} lost its mark first"
                    ));
                    break 'historic;
                }
            }
        }
    }
    push_check(&mut checks, "historic-pointedness", failure);

    // Core preservation: the restriction to the marked set never changes.
    let original = log.initial.graph();
    let mut failure = None;
    for (k, s) in snaps.iter().enumerate() {
        let now = s.graph().restrict_keep_labels(&s.points).expect("marks are in range");
        let then = original.restrict_keep_labels(&s.points).expect("marks are in range");
        if now != then {
            failure = Some(format!("snapshot {k}: core edges differ from the input's restriction"));
            break;
        }
    }
    push_check(&mut checks, "core-preserved", failure);

    // Edges are transversal to the parts.
    let mut failure = None;
    'transversal: for (k, s) in snaps.iter().enumerate() {
        for part in &s.parts {
            let part: BTreeSet<u32> = part.iter().copied().collect();
            for e in &s.edges {
                if e.iter().filter(|v| part.contains(v)).count() > 1 {
                    failure = Some(format!("snapshot {k}: edge {e:?} meets one part twice"));
                    break 'transversal;
                }
            }
        }
    }
    push_check(&mut checks, "edges-transversal", failure);

    // Each snapshot is exactly the blow-up of its core onto its parts.
    let mut failure = None;
    for (k, s) in snaps.iter().enumerate() {
        let g = s.graph();
        let core = g.restrict_keep_labels(&s.points).expect("marks are in range");
        let part_of: BTreeMap<u32, usize> = s
            .parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.iter().map(move |&v| (v, i)))
            .collect();
        let mut expected = Vec::new();
        for e in core.edges() {
            for &a in &s.parts[part_of[&e[0]]] {
                for &b in &s.parts[part_of[&e[1]]] {
                    for &c in &s.parts[part_of[&e[2]]] {
                        expected.push(vec![a, b, c]);
                    }
                }
            }
        }
        let expected = Hypergraph::new(s.n, 3, expected).expect("blow-up edges stay valid");
        if expected != g {
            failure = Some(format!(
                "snapshot {k}: {} edges but its core blows up to {}",
                g.edge_count(),
                expected.edge_count()
            ));
            break;
        }
    }
    push_check(&mut checks, "blow-up-structure", failure);

    // Live and marked sets shrink; strictly so on every recorded round.
    let mut failure = None;
    for w in snaps.windows(2) {
        let (prev, next) = (w[0], w[1]);
        let prev_alive: BTreeSet<u32> = prev.alive.iter().copied().collect();
        let prev_points: BTreeSet<u32> = prev.points.iter().copied().collect();
        if !next.alive.iter().all(|v| prev_alive.contains(v)) {
            failure = Some("a live set gained a vertex".into());
            break;
        }
        if !next.points.iter().all(|v| prev_points.contains(v)) {
            failure = Some("a marked set gained a vertex".into());
            break;
        }
    }
    if failure.is_none() {
        let mut prev = &log.initial;
        for r in &log.rounds {
            let next = &r.after_merging;
            if (next.alive.len(), next.points.len()) >= (prev.alive.len(), prev.points.len()) {
                failure = Some(format!("round {} did not shrink (live, marked)", r.index));
                break;
            }
            prev = next;
        }
    }
    push_check(&mut checks, "monotone-shrinking", failure);

    // Cleaning's fixed point honors the degree bound.
    let bound = default_bound(log.alpha);
    let mut failure = None;
    for r in &log.rounds {
        let s = &r.after_cleaning;
        let g = s.graph();
        let b = bound(s.alive.len());
        if let Some(&v) = s.alive.iter().find(|&&v| (g.degree(v) as f64) < b) {
            failure = Some(format!(
                "round {}: vertex {v} has degree {} below the bound {b}",
                r.index,
                g.degree(v)
            ));
            break;
        }
    }
    push_check(&mut checks, "cleaning-threshold", failure);

    // The exact merge edge-count identity, hence monotonicity.
    let mut failure = None;
    for r in &log.rounds {
        let Some(m) = &r.merge else { continue };
        let before = r.after_cleaning.graph();
        let expected = before.edge_count() as i64
            + (before.degree(m.absorber) as i64 - before.degree(m.absorbed) as i64)
                * m.absorbed_part_size as i64;
        let got = r.after_merging.edges.len() as i64;
        if got != expected || got < before.edge_count() as i64 {
            failure = Some(format!(
                "round {}: merge produced {} edges, identity demands {}",
                r.index, got, expected
            ));
            break;
        }
    }
    push_check(&mut checks, "merge-size-identity", failure);

    // A part absorbed at some round that still meets the final live set can
    // only have been absorbed into a part that also meets it.
    let final_alive: BTreeSet<u32> = log.final_snapshot().alive.iter().copied().collect();
    let mut failure = None;
    for r in &log.rounds {
        let Some(m) = &r.merge else { continue };
        let s = &r.after_cleaning;
        let find_part = |rep: u32| -> Option<&Vec<u32>> {
            s.points.iter().position(|&p| p == rep).map(|i| &s.parts[i])
        };
        let (Some(absorbed), Some(absorber)) = (find_part(m.absorbed), find_part(m.absorber)) else {
            failure = Some(format!("round {}: merge marks missing from the snapshot", r.index));
            break;
        };
        let absorbed_meets = absorbed.iter().any(|v| final_alive.contains(v));
        let absorber_meets = absorber.iter().any(|v| final_alive.contains(v));
        if absorbed_meets && !absorber_meets {
            failure = Some(format!(
                "round {}: absorbed part survives to the end but the absorbing part does not",
                r.index
            ));
            break;
        }
    }
    push_check(&mut checks, "merged-part-inheritance", failure);

    // Freeness from homomorphic triple-system images is preserved.
    if hom::contains_k333_hom(&original) {
        checks.push(AuditCheck {
            name: "hom-freeness-preserved".into(),
            passed: true,
            details: "skipped: the input already contains a homomorphic image".into(),
        });
    } else {
        let mut failure = None;
        for (k, s) in snaps.iter().enumerate() {
            if hom::contains_k333_hom(&s.graph()) {
                failure = Some(format!("snapshot {k} acquired a homomorphic image"));
                break;
            }
        }
        push_check(&mut checks, "hom-freeness-preserved", failure);
    }

    let passed = checks.iter().all(|c| c.passed);
    AuditReport { checks, passed }
}

/// Errors from 5-block partitions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("assignment lists {got} blocks for a ground set of {n}")]
    WrongLength { got: usize, n: u32 },
    #[error("vertex {v} is assigned block {b}; blocks are 1..=5")]
    BadBlock { v: u32, b: u8 },
    #[error("vertex {v} outside 1..={n}")]
    BadVertex { v: u32, n: u32 },
    #[error("vertex {v} repeated in the moved block")]
    DuplicateVertex { v: u32 },
}

/// A partition of `[n]` into five blocks, indexed 1..=5; blocks may be
/// empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FivePartition {
    n: u32,
    block_of: Vec<u8>,
}

impl FivePartition {
    /// Builds from a per-vertex block assignment (`assignment[v - 1]` is the
    /// block of `v`, in 1..=5).
    pub fn new(n: u32, assignment: &[u8]) -> Result<Self, PartitionError> {
        if assignment.len() != n as usize {
            return Err(PartitionError::WrongLength { got: assignment.len(), n });
        }
        for (i, &b) in assignment.iter().enumerate() {
            if !(1..=5).contains(&b) {
                return Err(PartitionError::BadBlock { v: i as u32 + 1, b });
            }
        }
        Ok(Self { n, block_of: assignment.to_vec() })
    }

    /// Builds from explicit blocks; vertices left unmentioned are invalid.
    pub fn from_blocks(n: u32, blocks: &[Vec<u32>; 5]) -> Result<Self, PartitionError> {
        let mut assignment = vec![0u8; n as usize];
        for (k, block) in blocks.iter().enumerate() {
            for &v in block {
                if v < 1 || v > n {
                    return Err(PartitionError::BadVertex { v, n });
                }
                if assignment[v as usize - 1] != 0 {
                    return Err(PartitionError::DuplicateVertex { v });
                }
                assignment[v as usize - 1] = k as u8 + 1;
            }
        }
        if let Some(i) = assignment.iter().position(|&b| b == 0) {
            return Err(PartitionError::BadBlock { v: i as u32 + 1, b: 0 });
        }
        Ok(Self { n, block_of: assignment })
    }

    /// Block index (1..=5) of a vertex.
    pub fn block_of(&self, v: u32) -> u8 {
        assert!(v >= 1 && v <= self.n, "vertex {v} outside 1..={}", self.n);
        self.block_of[v as usize - 1]
    }

    /// The five blocks, each ascending.
    pub fn blocks(&self) -> [Vec<u32>; 5] {
        let mut out: [Vec<u32>; 5] = Default::default();
        for (i, &b) in self.block_of.iter().enumerate() {
            out[b as usize - 1].push(i as u32 + 1);
        }
        out
    }

    /// The same partition with the given vertices reassigned, as a block, to
    /// `dest`.
    pub fn with_block_moved(&self, block: &[u32], dest: u8) -> Result<Self, PartitionError> {
        assert!((1..=5).contains(&dest), "destination block {dest} outside 1..=5");
        let mut assignment = self.block_of.clone();
        let mut seen = BTreeSet::new();
        for &v in block {
            if v < 1 || v > self.n {
                return Err(PartitionError::BadVertex { v, n: self.n });
            }
            if !seen.insert(v) {
                return Err(PartitionError::DuplicateVertex { v });
            }
            assignment[v as usize - 1] = dest;
        }
        Ok(Self { n: self.n, block_of: assignment })
    }
}

/// How a 5-block partition scores against a 3-graph: an edge is good when
/// its vertices land in three distinct blocks, bad when some block holds
/// exactly two of them, and very bad when one block holds all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartitionScore {
    /// `Σ_{p<q} e(W_p ∪ W_q) − 2 Σ_p e(W_p)`.
    pub sigma: i64,
    pub good: usize,
    pub bad: usize,
    pub very_bad: usize,
}

impl PartitionScore {
    /// The score recomputed from the classification counts; always equals
    /// `sigma`.
    pub fn classified_sigma(&self) -> i64 {
        self.bad as i64 + 2 * self.very_bad as i64
    }
}

/// Classifies every edge against the partition and scores it both by the
/// union/inside formula and by the classification counts; the two always
/// agree, and the function checks that they do.
pub fn edge_goodness(g: &Hypergraph, parts: &FivePartition) -> PartitionScore {
    assert_eq!(g.r(), 3, "edge scoring is for 3-graphs");
    assert_eq!(g.n(), parts.n, "partition carrier must match the ground set");
    let mut good = 0usize;
    let mut bad = 0usize;
    let mut very_bad = 0usize;
    let mut inside = [0i64; 5];
    let mut inside_pair = [[0i64; 5]; 5];
    for e in g.edges() {
        let b: Vec<u8> = e.iter().map(|&v| parts.block_of(v)).collect();
        let mut distinct: Vec<u8> = b.clone();
        distinct.sort_unstable();
        distinct.dedup();
        match distinct.len() {
            3 => good += 1,
            2 => {
                bad += 1;
                let (p, q) = (distinct[0] as usize - 1, distinct[1] as usize - 1);
                inside_pair[p][q] += 1;
            }
            1 => {
                very_bad += 1;
                inside[distinct[0] as usize - 1] += 1;
            }
            _ => unreachable!("a 3-set meets 1..=3 blocks"),
        }
    }
    // e(W_p ∪ W_q) = edges within the pair's union: the pair's two-block
    // edges plus the one-block edges of either side.
    let mut sigma = 0i64;
    for p in 0..5 {
        for q in p + 1..5 {
            sigma += inside_pair[p][q] + inside[p] + inside[q];
        }
        sigma -= 2 * inside[p];
    }
    let score = PartitionScore { sigma, good, bad, very_bad };
    assert_eq!(
        score.sigma,
        score.classified_sigma(),
        "the union/inside score must match the classification count"
    );
    score
}

/// The block index (1..=5) whose augmented partition scores lowest after
/// moving `block` there; ties resolve to the smallest index.
pub fn best_destination(
    g: &Hypergraph,
    parts: &FivePartition,
    block: &[u32],
) -> Result<u8, PartitionError> {
    let mut best: Option<(i64, u8)> = None;
    for dest in 1..=5u8 {
        let moved = parts.with_block_moved(block, dest)?;
        let sigma = edge_goodness(g, &moved).sigma;
        if best.map_or(true, |(s, _)| sigma < s) {
            best = Some((sigma, dest));
        }
    }
    Ok(best.expect("five destinations were scored").1)
}

/// Vertices whose count of non-good incident edges reaches
/// `threshold · n²`.
pub fn find_bad_vertices(g: &Hypergraph, parts: &FivePartition, threshold: f64) -> Vec<u32> {
    assert_eq!(g.r(), 3, "edge scoring is for 3-graphs");
    assert_eq!(g.n(), parts.n, "partition carrier must match the ground set");
    let mut non_good = vec![0u64; g.n() as usize];
    for e in g.edges() {
        let mut blocks: Vec<u8> = e.iter().map(|&v| parts.block_of(v)).collect();
        blocks.sort_unstable();
        blocks.dedup();
        if blocks.len() < 3 {
            for &v in e {
                non_good[v as usize - 1] += 1;
            }
        }
    }
    let cut = threshold * (g.n() as f64) * (g.n() as f64);
    (1..=g.n()).filter(|&v| (non_good[v as usize - 1] as f64) >= cut).collect()
}

/// One deletion of the peeling schedule.
#[derive(Debug, Clone, Serialize)]
pub struct PeelStep {
    pub live_before: usize,
    pub vertex: u32,
    pub degree: u64,
    /// The extremal degree the vertex fell short of.
    pub schedule: u64,
    /// `edges − t53_count(live)` before the deletion.
    pub potential_before: i64,
    /// The same potential after the deletion; always at least one more.
    pub potential_after: i64,
}

/// Record of a peeling run.
#[derive(Debug, Clone, Serialize)]
pub struct PeelLog {
    pub n: u32,
    pub steps: Vec<PeelStep>,
    pub final_alive: Vec<u32>,
    pub final_edges: Vec<Vec<u32>>,
    /// Minimum live degree at the end (`None` when nothing is live).
    pub final_min_degree: Option<u64>,
    /// The degree schedule at the final live count, when it is still at
    /// least 6.
    pub final_schedule: Option<u64>,
}

impl PeelLog {
    /// The peeled graph, on the original ground set.
    pub fn final_graph(&self) -> Hypergraph {
        Hypergraph::new(self.n, 3, self.final_edges.clone()).expect("peeled edges stay valid")
    }
}

/// Repeatedly deletes a minimum-degree vertex (smallest index on ties) while
/// at least 6 vertices are live and the minimum degree falls short of the
/// extremal degree `delta53_count` at the current live count. Each deletion
/// is checked to raise the potential `edges − t53_count(live)` by at least
/// one.
pub fn peel_min_degree(g: &Hypergraph) -> PeelLog {
    assert_eq!(g.r(), 3, "peeling is for 3-graphs");
    let mut alive: BTreeSet<u32> = (1..=g.n()).collect();
    let mut edges = g.edges_vec();
    let mut steps = Vec::new();
    loop {
        let live = alive.len();
        if live < 6 {
            break;
        }
        let schedule = families::delta53_count(live as u64);
        let mut deg: BTreeMap<u32, u64> = alive.iter().map(|&v| (v, 0)).collect();
        for e in &edges {
            for &v in e {
                *deg.get_mut(&v).expect("edges stay inside the live set") += 1;
            }
        }
        let (&vertex, &degree) = deg
            .iter()
            .min_by_key(|(&v, &d)| (d, v))
            .expect("at least six live vertices");
        if degree >= schedule {
            break;
        }
        let potential_before = edges.len() as i64 - families::t53_count(live as u64) as i64;
        alive.remove(&vertex);
        edges.retain(|e| !e.contains(&vertex));
        let potential_after = edges.len() as i64 - families::t53_count(live as u64 - 1) as i64;
        assert!(
            potential_after >= potential_before + 1,
            "deleting a below-schedule vertex must raise the potential"
        );
        steps.push(PeelStep {
            live_before: live,
            vertex,
            degree,
            schedule,
            potential_before,
            potential_after,
        });
    }
    let final_min_degree = if alive.is_empty() {
        None
    } else {
        let mut deg: BTreeMap<u32, u64> = alive.iter().map(|&v| (v, 0)).collect();
        for e in &edges {
            for &v in e {
                *deg.get_mut(&v).expect("edges stay inside the live set") += 1;
            }
        }
        deg.values().copied().min()
    };
    let final_schedule = if alive.len() >= 6 {
        Some(families::delta53_count(alive.len() as u64))
    } else {
        None
    };
    PeelLog {
        n: g.n(),
        steps,
        final_alive: alive.into_iter().collect(),
        final_edges: edges,
        final_min_degree,
        final_schedule,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon;
    use crate::families::{build_turan_t53, delta53_count, t53_part_sizes};

    fn native_partition_state(n: u32) -> PointedPartitionedHypergraph {
        let g = build_turan_t53(n);
        let sizes = t53_part_sizes(n);
        let mut parts = Vec::new();
        let mut next = 1u32;
        for s in sizes {
            let members: Vec<u32> = (next..next + s).collect();
            parts.push((next, members));
            next += s;
        }
        PointedPartitionedHypergraph::with_parts(&g, parts).unwrap()
    }

    #[test]
    fn cleaning_leaves_the_balanced_construction_alone() {
        let g = build_turan_t53(20);
        assert_eq!(delta53_count(20), g.min_degree().unwrap());
        let bound = default_bound(0.01);
        assert!(bound(20) <= g.min_degree().unwrap() as f64);
        let mut state = PointedPartitionedHypergraph::initial(&g).unwrap();
        let before = state.clone();
        assert!(cleaning(&mut state, bound).is_empty());
        assert_eq!(state, before);
    }

    #[test]
    fn cleaning_removes_an_isolated_vertex_with_its_part() {
        let g = Hypergraph::new(5, 3, vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]])
            .unwrap();
        let mut state = PointedPartitionedHypergraph::initial(&g).unwrap();
        let events = cleaning(&mut state, |_| 1.0);
        assert_eq!(events[0].vertex, 5);
        assert!(!state.alive().contains(&5));
        assert!(!state.points().contains(&5));
        assert!(state.validate().is_ok());
    }

    #[test]
    fn merging_bridges_disjoint_components_and_keeps_edge_count() {
        let g = Hypergraph::new(6, 3, vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let mut state = PointedPartitionedHypergraph::initial(&g).unwrap();
        let m = merging(&mut state).expect("disjoint parts must merge");
        assert_eq!((m.absorber, m.absorbed), (1, 4));
        assert_eq!(state.points().len(), 5);
        assert!(m.edges_after >= m.edges_before);
        assert!(state.validate().is_ok());
    }

    #[test]
    fn merging_is_identity_once_all_parts_interact() {
        let mut state = native_partition_state(15);
        let before = state.clone();
        assert!(merging(&mut state).is_none());
        assert_eq!(state, before);
    }

    #[test]
    fn symmetrize_collapses_the_balanced_construction_to_its_core() {
        let g = build_turan_t53(25);
        let log = symmetrize(&g, 0.02).unwrap();
        let last = log.final_snapshot();
        assert_eq!(last.points.len(), 5);
        let core = last.graph().restrict(&last.points).unwrap();
        assert_eq!(canon::canonical_form(&core), canon::canonical_form(&Hypergraph::complete(5, 3)));
        assert_eq!(last.graph(), g, "merging equal parts back rebuilds the same graph");
        assert!(audit_properties(&log).passed);
    }

    #[test]
    fn symmetrize_fixes_the_complete_core_immediately() {
        let g = Hypergraph::complete(5, 3);
        let log = symmetrize(&g, 0.02).unwrap();
        assert!(log.rounds.is_empty());
    }

    #[test]
    fn symmetrize_cleans_the_empty_graph_away() {
        let g = Hypergraph::empty(7, 3);
        let log = symmetrize(&g, 0.02).unwrap();
        assert!(log.final_snapshot().alive.is_empty());
        assert!(audit_properties(&log).passed);
    }

    #[test]
    fn random_orders_reach_the_same_collapsed_state() {
        let g = build_turan_t53(25);
        for seed in [1u64, 2, 3] {
            let log = symmetrize_with(&g, 0.02, ChoiceOrder::Random { seed }).unwrap();
            let last = log.final_snapshot();
            assert_eq!(last.points.len(), 5, "seed {seed}");
            assert_eq!(last.graph(), g, "seed {seed}");
            assert!(audit_properties(&log).passed, "seed {seed}");
        }
    }

    #[test]
    fn audit_rejects_a_corrupted_partition() {
        let g = build_turan_t53(15);
        let mut log = symmetrize(&g, 0.02).unwrap();
        let last = log.rounds.last_mut().expect("the run has rounds");
        last.after_merging.parts[0].pop();
        let report = audit_properties(&log);
        assert!(!report.passed);
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "partition-structure" && !c.passed));
    }

    #[test]
    fn native_partition_scores_zero() {
        let g = build_turan_t53(10);
        let sizes = t53_part_sizes(10);
        let mut assignment = Vec::new();
        for (k, s) in sizes.iter().enumerate() {
            assignment.extend(std::iter::repeat(k as u8 + 1).take(*s as usize));
        }
        let parts = FivePartition::new(10, &assignment).unwrap();
        let score = edge_goodness(&g, &parts);
        assert_eq!((score.sigma, score.bad, score.very_bad), (0, 0, 0));
        assert_eq!(score.good, g.edge_count());
    }

    #[test]
    fn moving_one_vertex_off_its_block_is_visible_in_the_score() {
        let g = build_turan_t53(10);
        let sizes = t53_part_sizes(10);
        let mut assignment = Vec::new();
        for (k, s) in sizes.iter().enumerate() {
            assignment.extend(std::iter::repeat(k as u8 + 1).take(*s as usize));
        }
        assignment[0] = 2;
        let parts = FivePartition::new(10, &assignment).unwrap();
        let score = edge_goodness(&g, &parts);
        assert!(score.sigma > 0);
        assert_eq!(score.sigma, score.classified_sigma());
    }

    #[test]
    fn one_block_makes_every_edge_very_bad() {
        let g = build_turan_t53(10);
        let parts = FivePartition::new(10, &[1u8; 10]).unwrap();
        let score = edge_goodness(&g, &parts);
        assert_eq!(score.very_bad, g.edge_count());
        assert_eq!(score.sigma, 2 * g.edge_count() as i64);
    }

    #[test]
    fn best_destination_returns_a_native_block_home() {
        let g = build_turan_t53(15);
        let sizes = t53_part_sizes(15);
        let mut assignment = Vec::new();
        for (k, s) in sizes.iter().enumerate() {
            assignment.extend(std::iter::repeat(k as u8 + 1).take(*s as usize));
        }
        // Strand the first two vertices of block 3 in block 1; moving them
        // back as a block must return them to block 3.
        let blocks_start: u32 = sizes[0] + sizes[1] + 1;
        let moved = [blocks_start, blocks_start + 1];
        for &v in &moved {
            assignment[v as usize - 1] = 1;
        }
        let parts = FivePartition::new(15, &assignment).unwrap();
        assert_eq!(best_destination(&g, &parts, &moved).unwrap(), 3);
    }

    #[test]
    fn best_destination_breaks_full_ties_low() {
        let g = Hypergraph::empty(5, 3);
        let parts = FivePartition::new(5, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(best_destination(&g, &parts, &[1]).unwrap(), 1);
    }

    #[test]
    fn bad_vertices_only_appear_with_non_good_edges() {
        let g = build_turan_t53(20);
        let sizes = t53_part_sizes(20);
        let mut assignment = Vec::new();
        for (k, s) in sizes.iter().enumerate() {
            assignment.extend(std::iter::repeat(k as u8 + 1).take(*s as usize));
        }
        let native = FivePartition::new(20, &assignment).unwrap();
        assert!(find_bad_vertices(&g, &native, 1e-9).is_empty());
        let mut swapped = assignment.clone();
        swapped[0] = 2;
        let moved = FivePartition::new(20, &swapped).unwrap();
        let flagged = find_bad_vertices(&g, &moved, 1e-3);
        assert!(flagged.contains(&1));
        assert!(find_bad_vertices(&g, &moved, 1.0).is_empty());
    }

    #[test]
    fn peeling_leaves_the_balanced_construction_alone() {
        let log = peel_min_degree(&build_turan_t53(20));
        assert!(log.steps.is_empty());
        assert_eq!(log.final_min_degree, Some(delta53_count(20)));
    }

    #[test]
    fn peeling_takes_a_stripped_vertex_first() {
        let g = build_turan_t53(20);
        let edges: Vec<Vec<u32>> = g.edges().filter(|e| !e.contains(&1)).map(|e| e.to_vec()).collect();
        let log = peel_min_degree(&Hypergraph::new(20, 3, edges).unwrap());
        assert_eq!(log.steps[0].vertex, 1);
        assert_eq!(log.steps[0].degree, 0);
    }

    #[test]
    fn peeling_halts_at_the_small_guard() {
        let log = peel_min_degree(&Hypergraph::empty(10, 3));
        assert_eq!(log.final_alive.len(), 5);
        assert_eq!(log.final_schedule, None);
    }
}
