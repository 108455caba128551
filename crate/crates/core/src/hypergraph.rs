//! Core combinatorial types: uniform hypergraphs, set families, partitions.
//!
//! Vertices are the integers `1..=n`. A [`Hypergraph`] is an `r`-uniform edge
//! set stored flat (each edge sorted ascending, edges sorted lexicographically,
//! no duplicates), which keeps million-edge Turán constructions cheap. A
//! [`SetFamily`] holds members of arbitrary sizes and is the carrier for
//! shifting and for generator families.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

/// Errors for construction and combinatorial operations on graphs/families.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    /// An edge's size disagrees with the declared uniformity.
    #[error("edge {edge:?} has {got} vertices but the graph is {expected}-uniform")]
    WrongArity { edge: Vec<u32>, got: usize, expected: u32 },
    /// A vertex lies outside `1..=n`.
    #[error("vertex {vertex} lies outside the ground set 1..={n}")]
    VertexOutOfRange { vertex: u32, n: u32 },
    /// A set repeats a vertex.
    #[error("set {set:?} repeats vertex {vertex}")]
    RepeatedVertex { set: Vec<u32>, vertex: u32 },
    /// An operation requiring an intersecting family found a disjoint pair.
    #[error("family is not intersecting: {a:?} and {b:?} are disjoint")]
    NotIntersecting { a: Vec<u32>, b: Vec<u32> },
    /// A generator member is larger than the target uniformity.
    #[error("generator member {member:?} has {got} vertices, more than r = {r}")]
    GeneratorTooLarge { member: Vec<u32>, got: usize, r: u32 },
    /// A vertex map is not a permutation of the ground set.
    #[error("map must be a permutation of 1..={n}")]
    NotAPermutation { n: u32 },
    /// Blow-up factors must be positive.
    #[error("blow-up factor must be at least 1")]
    ZeroBlowUp,
    /// Partition parts must be nonempty, disjoint, and cover the ground set.
    #[error("partition is malformed over 1..={n}: {reason}")]
    MalformedPartition { n: u32, reason: String },
}

fn check_set(set: &[u32], n: u32) -> Result<Vec<u32>, HypergraphError> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    for &v in &sorted {
        if v < 1 || v > n {
            return Err(HypergraphError::VertexOutOfRange { vertex: v, n });
        }
    }
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(HypergraphError::RepeatedVertex { set: set.to_vec(), vertex: w[0] });
        }
    }
    Ok(sorted)
}

fn slices_intersect(a: &[u32], b: &[u32]) -> bool {
    // Both slices are sorted ascending.
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    // Both sorted ascending.
    let mut j = 0;
    for &v in small {
        while j < big.len() && big[j] < v {
            j += 1;
        }
        if j >= big.len() || big[j] != v {
            return false;
        }
        j += 1;
    }
    true
}

/// Returns the first disjoint pair among the given sorted sets, if any.
fn find_disjoint_pair<'a>(sets: &'a [&'a [u32]]) -> Option<(&'a [u32], &'a [u32])> {
    for (i, a) in sets.iter().enumerate() {
        if a.is_empty() {
            // The empty set is disjoint from everything, including itself.
            return Some((a, a));
        }
        for b in &sets[i + 1..] {
            if !slices_intersect(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

fn covers_pairs_impl<'a>(
    n: u32,
    sets: impl Iterator<Item = &'a [u32]>,
    targets: &[u32],
) -> bool {
    for &v in targets {
        assert!(v >= 1 && v <= n, "covers_pairs target {v} outside ground set 1..={n}");
    }
    if targets.len() < 2 {
        return true;
    }
    let n = n as usize;
    let mut covered = vec![false; n * n];
    for set in sets {
        for (pi, &a) in set.iter().enumerate() {
            for &b in &set[pi + 1..] {
                covered[(a as usize - 1) * n + (b as usize - 1)] = true;
            }
        }
    }
    for (i, &a) in targets.iter().enumerate() {
        for &b in &targets[i + 1..] {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if lo == hi {
                continue;
            }
            if !covered[(lo as usize - 1) * n + (hi as usize - 1)] {
                return false;
            }
        }
    }
    true
}

/// An `r`-uniform hypergraph on vertex set `1..=n`.
///
/// Stored in canonical form: every edge sorted ascending, edge list sorted
/// lexicographically with duplicates removed. Structural equality is
/// therefore equality of labeled edge sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: u32,
    r: u32,
    flat: Vec<u32>,
}

impl Hypergraph {
    /// Builds a graph from an edge list, normalizing to canonical form.
    pub fn new(
        n: u32,
        r: u32,
        edges: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Self, HypergraphError> {
        let mut sorted_edges = Vec::new();
        for edge in edges {
            if edge.len() != r as usize {
                return Err(HypergraphError::WrongArity {
                    got: edge.len(),
                    edge,
                    expected: r,
                });
            }
            sorted_edges.push(check_set(&edge, n)?);
        }
        sorted_edges.sort_unstable();
        sorted_edges.dedup();
        let mut flat = Vec::with_capacity(sorted_edges.len() * r as usize);
        for e in &sorted_edges {
            flat.extend_from_slice(e);
        }
        Ok(Self { n, r, flat })
    }

    /// Fast path for callers that produce edges already in canonical order.
    pub(crate) fn from_flat_sorted(n: u32, r: u32, flat: Vec<u32>) -> Self {
        debug_assert_eq!(flat.len() % r.max(1) as usize, 0);
        debug_assert!(
            flat.chunks_exact(r as usize).tuple_windows().all(|(a, b)| a < b),
            "edges must be strictly increasing lexicographically"
        );
        Self { n, r, flat }
    }

    /// Complete `r`-graph on `n` vertices: all `C(n, r)` edges.
    pub fn complete(n: u32, r: u32) -> Self {
        let mut flat = Vec::new();
        for combo in (1..=n).combinations(r as usize) {
            flat.extend_from_slice(&combo);
        }
        Self { n, r, flat }
    }

    /// Empty edge set on `n` vertices.
    pub fn empty(n: u32, r: u32) -> Self {
        Self { n, r, flat: Vec::new() }
    }

    /// Number of vertices in the ground set.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Uniformity (edge size).
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        if self.r == 0 {
            0
        } else {
            self.flat.len() / self.r as usize
        }
    }

    /// Iterates over edges as sorted slices, in lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[u32]> + Clone {
        self.flat.chunks_exact(self.r.max(1) as usize)
    }

    /// Edges collected into owned vectors (convenience for tests and IO).
    pub fn edges_vec(&self) -> Vec<Vec<u32>> {
        self.edges().map(|e| e.to_vec()).collect()
    }

    /// Membership test for a sorted or unsorted candidate edge.
    pub fn contains_edge(&self, edge: &[u32]) -> bool {
        if edge.len() != self.r as usize {
            return false;
        }
        let mut probe = edge.to_vec();
        probe.sort_unstable();
        let r = self.r as usize;
        let mut lo = 0usize;
        let mut hi = self.edge_count();
        while lo < hi {
            let mid = (lo + hi) / 2;
            let e = &self.flat[mid * r..(mid + 1) * r];
            match e.cmp(probe.as_slice()) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Degree of every vertex (index `v - 1`).
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.n as usize];
        for &v in &self.flat {
            deg[v as usize - 1] += 1;
        }
        deg
    }

    /// Degree of a single vertex.
    pub fn degree(&self, v: u32) -> u64 {
        assert!(v >= 1 && v <= self.n, "vertex {v} outside 1..={}", self.n);
        self.flat.iter().filter(|&&w| w == v).count() as u64
    }

    /// Minimum degree over all vertices (isolated vertices count as 0).
    /// Returns `None` on the empty ground set.
    pub fn min_degree(&self) -> Option<u64> {
        if self.n == 0 {
            None
        } else {
            self.degrees().into_iter().min()
        }
    }

    /// Number of edges containing both `a` and `b`.
    pub fn pair_degree(&self, a: u32, b: u32) -> u64 {
        assert!(a != b, "pair degree needs two distinct vertices");
        self.edges()
            .filter(|e| e.contains(&a) && e.contains(&b))
            .count() as u64
    }

    /// Vertices appearing in at least one edge.
    pub fn support_vertices(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.flat.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Restriction to `targets`, re-indexed onto `1..=targets.len()` by the
    /// order-preserving map. Keeps only edges entirely inside `targets`.
    pub fn restrict(&self, targets: &[u32]) -> Result<Self, HypergraphError> {
        let keep = check_set(targets, self.n)?;
        let mut rank = vec![0u32; self.n as usize + 1];
        for (i, &v) in keep.iter().enumerate() {
            rank[v as usize] = i as u32 + 1;
        }
        let mut flat = Vec::new();
        for e in self.edges() {
            if is_subset(e, &keep) {
                flat.extend(e.iter().map(|&v| rank[v as usize]));
            }
        }
        Ok(Self { n: keep.len() as u32, r: self.r, flat })
    }

    /// Restriction to `targets` without re-indexing: same ground set, only
    /// edges entirely inside `targets` survive.
    pub fn restrict_keep_labels(&self, targets: &[u32]) -> Result<Self, HypergraphError> {
        let keep = check_set(targets, self.n)?;
        let mut flat = Vec::new();
        for e in self.edges() {
            if is_subset(e, &keep) {
                flat.extend_from_slice(e);
            }
        }
        Ok(Self { n: self.n, r: self.r, flat })
    }

    /// Removes vertices of degree zero, re-indexing the rest order-preservingly.
    pub fn strip_isolated(&self) -> Self {
        let support = self.support_vertices();
        self.restrict(&support).expect("support vertices are in range")
    }

    /// `t`-fold blow-up: vertex `v` becomes the block
    /// `{(v-1)t + 1, ..., vt}`, and each edge becomes the `t^r` transversal
    /// edges through its blocks.
    pub fn blow_up(&self, t: u32) -> Result<Self, HypergraphError> {
        if t == 0 {
            return Err(HypergraphError::ZeroBlowUp);
        }
        if t == 1 {
            return Ok(self.clone());
        }
        let r = self.r as usize;
        let mut edges = Vec::with_capacity(self.edge_count() * (t as usize).pow(self.r));
        for e in self.edges() {
            let mut idx = vec![0u32; r];
            loop {
                edges.push(
                    e.iter()
                        .zip(&idx)
                        .map(|(&v, &k)| (v - 1) * t + 1 + k)
                        .collect::<Vec<u32>>(),
                );
                // Odometer over the t^r offsets.
                let mut pos = r;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    if idx[pos] + 1 < t {
                        idx[pos] += 1;
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&k| k == 0) {
                    break;
                }
            }
        }
        Self::new(self.n * t, self.r, edges)
    }

    /// Applies a permutation given as `perm[v - 1] = image of v`.
    pub fn permuted(&self, perm: &[u32]) -> Result<Self, HypergraphError> {
        validate_permutation(perm, self.n)?;
        let edges = self
            .edges()
            .map(|e| e.iter().map(|&v| perm[v as usize - 1]).collect::<Vec<u32>>())
            .collect::<Vec<_>>();
        Self::new(self.n, self.r, edges)
    }

    /// True when every two edges share a vertex (and no edge is empty).
    pub fn is_intersecting(&self) -> bool {
        let sets: Vec<&[u32]> = self.edges().collect();
        find_disjoint_pair(&sets).is_none()
    }

    /// True when the family is intersecting and no further `r`-set on `[n]`
    /// can be added without creating a disjoint pair.
    ///
    /// Errors when the graph is not intersecting in the first place.
    pub fn is_maximal_intersecting(&self) -> Result<bool, HypergraphError> {
        let sets: Vec<&[u32]> = self.edges().collect();
        if let Some((a, b)) = find_disjoint_pair(&sets) {
            return Err(HypergraphError::NotIntersecting { a: a.to_vec(), b: b.to_vec() });
        }
        for cand in (1..=self.n).combinations(self.r as usize) {
            if self.contains_edge(&cand) {
                continue;
            }
            let blocked = self.edges().any(|e| !slices_intersect(e, &cand));
            if !blocked {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when every unordered pair of distinct vertices from `targets`
    /// lies inside some edge.
    pub fn covers_pairs(&self, targets: &[u32]) -> bool {
        covers_pairs_impl(self.n, self.edges(), targets)
    }

    /// Multiset of pair-coverage counts: for each unordered pair of distinct
    /// vertices of `[n]`, how many edges contain it. Sorted ascending.
    pub fn pair_coverage_profile(&self) -> Vec<u64> {
        let n = self.n as usize;
        let mut counts = vec![0u64; n * n];
        for e in self.edges() {
            for (i, &a) in e.iter().enumerate() {
                for &b in &e[i + 1..] {
                    counts[(a as usize - 1) * n + (b as usize - 1)] += 1;
                }
            }
        }
        let mut profile = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                profile.push(counts[a * n + b]);
            }
        }
        profile.sort_unstable();
        profile
    }

    /// Edges as vertex bitmasks (bit `v - 1` set). Requires `n <= 128`.
    pub fn edge_masks(&self) -> Vec<u128> {
        assert!(self.n <= 128, "bitmask path supports at most 128 vertices, got {}", self.n);
        self.edges()
            .map(|e| e.iter().fold(0u128, |m, &v| m | (1u128 << (v - 1))))
            .collect()
    }

    /// Forgets uniformity, yielding the same edges as a set family.
    pub fn to_set_family(&self) -> SetFamily {
        SetFamily {
            n: self.n,
            members: self.edges_vec(),
        }
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, r={}, edges={:?})", self.n, self.r, self.edges_vec())
    }
}

pub(crate) fn validate_permutation(perm: &[u32], n: u32) -> Result<(), HypergraphError> {
    if perm.len() != n as usize {
        return Err(HypergraphError::NotAPermutation { n });
    }
    let mut seen = vec![false; n as usize];
    for &v in perm {
        if v < 1 || v > n || seen[v as usize - 1] {
            return Err(HypergraphError::NotAPermutation { n });
        }
        seen[v as usize - 1] = true;
    }
    Ok(())
}

/// A family of finite sets over ground set `1..=n`; members may have any
/// size (including sizes differing between members). Canonical storage:
/// members sorted ascending internally and ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: u32,
    members: Vec<Vec<u32>>,
}

impl SetFamily {
    /// Builds a family, normalizing to canonical order and deduplicating.
    pub fn new(
        n: u32,
        members: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Self, HypergraphError> {
        let mut sorted: Vec<Vec<u32>> = members
            .into_iter()
            .map(|m| check_set(&m, n))
            .collect::<Result<_, _>>()?;
        sorted.sort_unstable();
        sorted.dedup();
        Ok(Self { n, members: sorted })
    }

    /// Ground set size.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True when the family has no members.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    /// Membership test.
    pub fn contains(&self, set: &[u32]) -> bool {
        let mut probe = set.to_vec();
        probe.sort_unstable();
        self.members.binary_search(&probe).is_ok()
    }

    /// True when every two members share an element (and no member is empty).
    pub fn is_intersecting(&self) -> bool {
        let sets: Vec<&[u32]> = self.members.iter().map(|m| m.as_slice()).collect();
        find_disjoint_pair(&sets).is_none()
    }

    /// True when no member strictly contains another.
    pub fn is_antichain(&self) -> bool {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if a.len() != b.len() && (is_subset(a, b) || is_subset(b, a)) {
                    return false;
                }
            }
        }
        true
    }

    /// True when every unordered pair of distinct vertices from `targets`
    /// lies inside some member.
    pub fn covers_pairs(&self, targets: &[u32]) -> bool {
        covers_pairs_impl(self.n, self.members.iter().map(|m| m.as_slice()), targets)
    }

    /// Members containing `v`, with `v` removed from each (the "link side"
    /// used by the domination test).
    pub fn link_sets(&self, v: u32) -> Vec<Vec<u32>> {
        assert!(v >= 1 && v <= self.n, "vertex {v} outside 1..={}", self.n);
        self.members
            .iter()
            .filter(|m| m.binary_search(&v).is_ok())
            .map(|m| m.iter().copied().filter(|&w| w != v).collect())
            .collect()
    }

    /// Members entirely inside `targets`, keeping labels.
    pub fn restrict_keep_labels(&self, targets: &[u32]) -> Result<Self, HypergraphError> {
        let keep = check_set(targets, self.n)?;
        Ok(Self {
            n: self.n,
            members: self
                .members
                .iter()
                .filter(|m| is_subset(m, &keep))
                .cloned()
                .collect(),
        })
    }

    /// The `r`-uniform family generated upward: all `r`-subsets of `[n]`
    /// containing at least one member. Errors when a member exceeds size `r`.
    pub fn generate(&self, n: u32, r: u32) -> Result<Hypergraph, HypergraphError> {
        if n < self.n {
            return Err(HypergraphError::VertexOutOfRange { vertex: self.n, n });
        }
        let mut edges = Vec::new();
        for m in &self.members {
            if m.len() > r as usize {
                return Err(HypergraphError::GeneratorTooLarge {
                    member: m.clone(),
                    got: m.len(),
                    r,
                });
            }
            let rest: Vec<u32> = (1..=n).filter(|v| m.binary_search(v).is_err()).collect();
            let extra = r as usize - m.len();
            for tail in rest.into_iter().combinations(extra) {
                let mut e = m.clone();
                e.extend(tail);
                edges.push(e);
            }
        }
        Hypergraph::new(n, r, edges)
    }

    /// Applies a permutation given as `perm[v - 1] = image of v`.
    pub fn permuted(&self, perm: &[u32]) -> Result<Self, HypergraphError> {
        validate_permutation(perm, self.n)?;
        let members = self
            .members
            .iter()
            .map(|m| m.iter().map(|&v| perm[v as usize - 1]).collect::<Vec<u32>>())
            .collect::<Vec<_>>();
        Self::new(self.n, members)
    }

    /// Reinterprets as an `r`-uniform hypergraph when every member has size
    /// `r`; errors otherwise.
    pub fn to_uniform(&self, r: u32) -> Result<Hypergraph, HypergraphError> {
        for m in &self.members {
            if m.len() != r as usize {
                return Err(HypergraphError::WrongArity {
                    edge: m.clone(),
                    got: m.len(),
                    expected: r,
                });
            }
        }
        Hypergraph::new(self.n, r, self.members.clone())
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, members={:?})", self.n, self.members)
    }
}

/// A partition of `1..=n` into nonempty, disjoint parts covering everything.
/// Parts are stored sorted internally and ordered by minimum element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    n: u32,
    parts: Vec<Vec<u32>>,
}

impl Partition {
    /// Validates and normalizes a partition.
    pub fn new(n: u32, parts: impl IntoIterator<Item = Vec<u32>>) -> Result<Self, HypergraphError> {
        let mut normalized: Vec<Vec<u32>> = Vec::new();
        let mut seen = vec![false; n as usize];
        for part in parts {
            if part.is_empty() {
                return Err(HypergraphError::MalformedPartition {
                    n,
                    reason: "empty part".into(),
                });
            }
            let sorted = check_set(&part, n)?;
            for &v in &sorted {
                if seen[v as usize - 1] {
                    return Err(HypergraphError::MalformedPartition {
                        n,
                        reason: format!("vertex {v} occurs in two parts"),
                    });
                }
                seen[v as usize - 1] = true;
            }
            normalized.push(sorted);
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(HypergraphError::MalformedPartition {
                n,
                reason: format!("vertex {} is in no part", v + 1),
            });
        }
        normalized.sort_by_key(|p| p[0]);
        Ok(Self { n, parts: normalized })
    }

    /// Discrete partition: every vertex alone.
    pub fn singletons(n: u32) -> Self {
        Self { n, parts: (1..=n).map(|v| vec![v]).collect() }
    }

    /// Ground set size.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Parts ordered by minimum element.
    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    /// Index (into `parts()`) of the part containing `v`.
    pub fn part_of(&self, v: u32) -> usize {
        assert!(v >= 1 && v <= self.n);
        self.parts
            .iter()
            .position(|p| p.binary_search(&v).is_ok())
            .expect("partition covers the ground set")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5_3() -> Hypergraph {
        Hypergraph::complete(5, 3)
    }

    #[test]
    fn complete_graph_has_binomial_edge_count() {
        assert_eq!(k5_3().edge_count(), 10);
        assert_eq!(Hypergraph::complete(6, 3).edge_count(), 20);
        assert_eq!(Hypergraph::complete(7, 3).edge_count(), 35);
    }

    #[test]
    fn construction_normalizes_edge_and_vertex_order() {
        let g = Hypergraph::new(5, 3, vec![vec![3, 2, 5], vec![1, 2, 3], vec![5, 2, 3]]).unwrap();
        assert_eq!(g.edges_vec(), vec![vec![1, 2, 3], vec![2, 3, 5]]);
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(matches!(
            Hypergraph::new(4, 3, vec![vec![1, 2]]),
            Err(HypergraphError::WrongArity { .. })
        ));
        assert!(matches!(
            Hypergraph::new(4, 3, vec![vec![1, 2, 9]]),
            Err(HypergraphError::VertexOutOfRange { vertex: 9, n: 4 })
        ));
        assert!(matches!(
            Hypergraph::new(4, 3, vec![vec![1, 2, 2]]),
            Err(HypergraphError::RepeatedVertex { .. })
        ));
    }

    #[test]
    fn restrict_complete_five_to_four_vertices_gives_complete_four() {
        let g = k5_3().restrict(&[1, 2, 3, 4]).unwrap();
        assert_eq!(g, Hypergraph::complete(4, 3));
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn restrict_reindexes_order_preservingly() {
        let g = Hypergraph::new(6, 3, vec![vec![2, 4, 6], vec![1, 2, 3]]).unwrap();
        let h = g.restrict(&[2, 4, 6]).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges_vec(), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn restrict_to_empty_set_yields_empty_graph() {
        let g = k5_3().restrict(&[]).unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn restrict_keep_labels_preserves_ground_set() {
        let g = k5_3().restrict_keep_labels(&[1, 2, 3, 4]).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 4);
        assert!(g.contains_edge(&[1, 2, 3]));
        assert!(!g.contains_edge(&[3, 4, 5]));
    }

    #[test]
    fn blow_up_of_single_edge_multiplies_edges_by_t_cubed() {
        let e = Hypergraph::new(3, 3, vec![vec![1, 2, 3]]).unwrap();
        let b = e.blow_up(2).unwrap();
        assert_eq!(b.n(), 6);
        assert_eq!(b.edge_count(), 8);
        // Blocks: 1 -> {1,2}, 2 -> {3,4}, 3 -> {5,6}.
        assert!(b.contains_edge(&[1, 3, 5]));
        assert!(b.contains_edge(&[2, 4, 6]));
        assert!(!b.contains_edge(&[1, 2, 3]));
    }

    #[test]
    fn blow_up_factor_one_is_identity() {
        let g = k5_3();
        assert_eq!(g.blow_up(1).unwrap(), g);
    }

    #[test]
    fn blow_up_of_complete_five_has_eighty_edges_at_t_two() {
        assert_eq!(k5_3().blow_up(2).unwrap().edge_count(), 80);
    }

    #[test]
    fn blow_up_rejects_zero_factor() {
        assert!(matches!(k5_3().blow_up(0), Err(HypergraphError::ZeroBlowUp)));
    }

    #[test]
    fn degrees_and_min_degree_count_isolated_vertices() {
        let g = Hypergraph::new(4, 3, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(g.degrees(), vec![1, 1, 1, 0]);
        assert_eq!(g.min_degree(), Some(0));
        assert_eq!(g.strip_isolated().n(), 3);
    }

    #[test]
    fn intersecting_detection() {
        assert!(k5_3().is_intersecting());
        assert!(!Hypergraph::complete(6, 3).is_intersecting());
    }

    #[test]
    fn complete_five_is_maximal_intersecting() {
        assert_eq!(k5_3().is_maximal_intersecting(), Ok(true));
    }

    #[test]
    fn maximal_check_rejects_non_intersecting_input() {
        assert!(matches!(
            Hypergraph::complete(6, 3).is_maximal_intersecting(),
            Err(HypergraphError::NotIntersecting { .. })
        ));
    }

    #[test]
    fn dropping_an_edge_from_complete_five_breaks_maximality() {
        let edges: Vec<Vec<u32>> =
            k5_3().edges_vec().into_iter().filter(|e| e != &vec![1, 2, 3]).collect();
        let g = Hypergraph::new(5, 3, edges).unwrap();
        assert_eq!(g.is_maximal_intersecting(), Ok(false));
    }

    #[test]
    fn covers_pairs_on_full_and_partial_targets() {
        assert!(k5_3().covers_pairs(&[1, 2, 3, 4, 5]));
        let single = Hypergraph::new(4, 3, vec![vec![1, 2, 3]]).unwrap();
        assert!(!single.covers_pairs(&[1, 2, 3, 4]));
        assert!(single.covers_pairs(&[1, 2, 3]));
        assert!(single.covers_pairs(&[4])); // no pairs to cover
        assert!(single.covers_pairs(&[]));
    }

    #[test]
    fn pair_coverage_profile_of_complete_five_is_constant_three() {
        assert_eq!(k5_3().pair_coverage_profile(), vec![3u64; 10]);
    }

    #[test]
    fn permuted_relabels_edges() {
        let g = Hypergraph::new(3, 2, vec![vec![1, 2]]).unwrap();
        let h = g.permuted(&[3, 2, 1]).unwrap();
        assert_eq!(h.edges_vec(), vec![vec![2, 3]]);
        assert!(g.permuted(&[1, 1, 2]).is_err());
    }

    #[test]
    fn set_family_normalization_and_antichain() {
        let f = SetFamily::new(4, vec![vec![3, 1], vec![1, 3], vec![2, 4]]).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.is_antichain());
        let g = SetFamily::new(4, vec![vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert!(!g.is_antichain());
    }

    #[test]
    fn set_family_with_empty_member_is_not_intersecting() {
        let f = SetFamily::new(3, vec![vec![], vec![1, 2]]).unwrap();
        assert!(!f.is_intersecting());
    }

    #[test]
    fn link_sets_drop_the_pivot_vertex() {
        let f = SetFamily::new(5, vec![vec![1, 2], vec![1, 4], vec![2, 3, 4]]).unwrap();
        assert_eq!(f.link_sets(1), vec![vec![2], vec![4]]);
        assert_eq!(f.link_sets(4), vec![vec![1], vec![2, 3]]);
        assert_eq!(f.link_sets(5), Vec::<Vec<u32>>::new());
    }

    #[test]
    fn generate_star_from_point_has_binomial_count() {
        let pt = SetFamily::new(1, vec![vec![1]]).unwrap();
        let star = pt.generate(6, 3).unwrap();
        assert_eq!(star.edge_count(), 10); // C(5, 2)
        assert!(star.edges().all(|e| e.contains(&1)));
    }

    #[test]
    fn generate_deduplicates_overlapping_extensions() {
        let triangle =
            SetFamily::new(3, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        let g = triangle.generate(6, 3).unwrap();
        // 3 pairs x 4 extensions = 12 raw, {1,2,3} generated three times.
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn generate_rejects_oversized_members() {
        let f = SetFamily::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert!(matches!(
            f.generate(5, 3),
            Err(HypergraphError::GeneratorTooLarge { .. })
        ));
    }

    #[test]
    fn uniform_round_trip_through_set_family() {
        let g = k5_3();
        assert_eq!(g.to_set_family().to_uniform(3).unwrap(), g);
    }

    #[test]
    fn partition_validation_catches_gaps_overlaps_and_empty_parts() {
        assert!(Partition::new(4, vec![vec![1, 2], vec![3, 4]]).is_ok());
        assert!(Partition::new(4, vec![vec![1, 2], vec![2, 3, 4]]).is_err());
        assert!(Partition::new(4, vec![vec![1, 2], vec![4]]).is_err());
        assert!(Partition::new(4, vec![vec![1, 2, 3, 4], vec![]]).is_err());
    }

    #[test]
    fn partition_part_lookup() {
        let p = Partition::new(5, vec![vec![5], vec![1, 3], vec![2, 4]]).unwrap();
        assert_eq!(p.parts().len(), 3);
        assert_eq!(p.part_of(3), p.part_of(1));
        assert_ne!(p.part_of(1), p.part_of(2));
    }
}
