//! Canonical labeling, isomorphism testing, and symmetry detection.
//!
//! The canonical form of a hypergraph is the lexicographically smallest edge
//! list over all relabelings consistent with an isomorphism-invariant vertex
//! coloring. Colors start from degrees and are refined by the multiset of
//! edge color-profiles at each vertex; the remaining ambiguity (vertices
//! sharing a final color) is resolved by exhaustive search within color
//! cells, which stays tiny for the ground sets this crate targets (n <= 8 in
//! the census, slightly larger for catalog checks).

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Partition};

/// Errors from canonicalization.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    /// The residual symmetry after refinement is too large to enumerate.
    #[error("canonical search space {candidates} exceeds the guard {guard}")]
    TooSymmetric { candidates: u128, guard: u128 },
}

/// Hard cap on the number of candidate labelings examined (12! would pass
/// 479M; one full cell of 10 vertices costs 3.6M and is the practical worst
/// case here).
const CANDIDATE_GUARD: u128 = 10_000_000;

/// A canonical representative together with the relabeling that produces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    /// The canonical representative (same `n`, `r`).
    pub graph: Hypergraph,
    /// `relabeling[v - 1]` is the canonical label of original vertex `v`.
    pub relabeling: Vec<u32>,
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Stable isomorphism-invariant coloring; returns cells of equal color,
/// ordered by an invariant key.
fn refined_cells(g: &Hypergraph) -> Vec<Vec<u32>> {
    let n = g.n() as usize;
    let mut color: Vec<u64> = g.degrees();
    loop {
        // Signature of a vertex: own color plus the sorted multiset of the
        // color-profiles of its incident edges (profile = sorted colors of
        // the other endpoints).
        let mut signatures: Vec<(u64, Vec<Vec<u64>>)> = (0..n)
            .map(|i| (color[i], Vec::new()))
            .collect();
        for e in g.edges() {
            for &v in e {
                let mut profile: Vec<u64> = e
                    .iter()
                    .filter(|&&w| w != v)
                    .map(|&w| color[w as usize - 1])
                    .collect();
                profile.sort_unstable();
                signatures[v as usize - 1].1.push(profile);
            }
        }
        for sig in &mut signatures {
            sig.1.sort_unstable();
        }
        // Invariant renumbering: sort distinct signatures, map each to its rank.
        let mut distinct: Vec<&(u64, Vec<Vec<u64>>)> = signatures.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let rank: BTreeMap<&(u64, Vec<Vec<u64>>), u64> = distinct
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u64))
            .collect();
        let next: Vec<u64> = signatures.iter().map(|s| rank[s]).collect();
        let stable = {
            let old_classes = color.iter().unique().count();
            let new_classes = rank.len();
            old_classes == new_classes
        };
        color = next;
        if stable {
            break;
        }
    }
    let mut cells: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for v in 1..=n as u32 {
        cells.entry(color[v as usize - 1]).or_default().push(v);
    }
    cells.into_values().collect()
}

/// Computes the canonical form of a hypergraph.
pub fn canonical_form(g: &Hypergraph) -> Result<Canonical, CanonError> {
    let n = g.n() as usize;
    if n == 0 {
        return Ok(Canonical { graph: g.clone(), relabeling: Vec::new() });
    }
    let cells = refined_cells(g);
    let mut candidates: u128 = 1;
    for c in &cells {
        candidates = candidates.saturating_mul(factorial(c.len()));
    }
    if candidates > CANDIDATE_GUARD {
        return Err(CanonError::TooSymmetric { candidates, guard: CANDIDATE_GUARD });
    }

    // Canonical labels are assigned cell-block-wise: the k-th cell (in
    // invariant order) receives the next |cell| labels, in every possible
    // internal order; the lexicographically smallest relabeled edge list wins.
    let mut base = Vec::with_capacity(cells.len());
    let mut acc = 1u32;
    for c in &cells {
        base.push(acc);
        acc += c.len() as u32;
    }

    let r = g.r() as usize;
    let mut best_flat: Option<Vec<u32>> = None;
    let mut best_perm: Vec<u32> = Vec::new();
    let mut perm = vec![0u32; n];
    let cell_orders: Vec<Vec<Vec<u32>>> = cells
        .iter()
        .map(|c| {
            c.iter()
                .copied()
                .permutations(c.len())
                .collect::<Vec<_>>()
        })
        .collect();
    for choice in cell_orders.iter().multi_cartesian_product() {
        for (k, order) in choice.iter().enumerate() {
            for (offset, &v) in order.iter().enumerate() {
                perm[v as usize - 1] = base[k] + offset as u32;
            }
        }
        let mut edges: Vec<Vec<u32>> = g
            .edges()
            .map(|e| {
                let mut m: Vec<u32> = e.iter().map(|&v| perm[v as usize - 1]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        edges.sort_unstable();
        let mut flat = Vec::with_capacity(edges.len() * r);
        for e in &edges {
            flat.extend_from_slice(e);
        }
        if best_flat.as_ref().map_or(true, |b| flat < *b) {
            best_flat = Some(flat);
            best_perm = perm.clone();
        }
    }
    let flat = best_flat.expect("at least one labeling exists");
    let graph = Hypergraph::new(
        g.n(),
        g.r(),
        flat.chunks_exact(r.max(1)).map(|e| e.to_vec()).collect::<Vec<_>>(),
    )
    .expect("canonical relabeling preserves validity");
    Ok(Canonical { graph, relabeling: best_perm })
}

/// True when the two graphs are related by a vertex relabeling.
pub fn are_isomorphic(a: &Hypergraph, b: &Hypergraph) -> Result<bool, CanonError> {
    if a.n() != b.n() || a.r() != b.r() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    Ok(canonical_form(a)?.graph == canonical_form(b)?.graph)
}

/// Searches for a relabeling of `sub` making it an edge-subset of `host`
/// (both on the same ground set). Exhaustive over permutations; guarded.
pub fn embeds_as_subfamily(
    sub: &Hypergraph,
    host: &Hypergraph,
) -> Result<Option<Vec<u32>>, CanonError> {
    assert_eq!(sub.n(), host.n(), "embedding requires a common ground set");
    assert_eq!(sub.r(), host.r(), "embedding requires equal uniformity");
    let n = sub.n() as usize;
    let candidates = factorial(n);
    if candidates > CANDIDATE_GUARD {
        return Err(CanonError::TooSymmetric { candidates, guard: CANDIDATE_GUARD });
    }
    for perm in (1..=sub.n()).permutations(n) {
        let image = sub.permuted(&perm).expect("permutation is valid");
        if image.edges().all(|e| host.contains_edge(e)) {
            return Ok(Some(perm));
        }
    }
    Ok(None)
}

/// Partition of the vertices into classes where `i` and `j` share a class
/// exactly when the transposition `(i j)` is an automorphism.
///
/// Sharing-a-transposition is an equivalence: if `(i j)` and `(j k)` are
/// automorphisms then so is their conjugate `(i k)`. The resulting classes
/// are in general finer than full automorphism orbits (a rotation may relate
/// vertices that no single swap relates); the weight-averaging lemma only
/// uses swaps, so this is the partition it needs.
pub fn transposition_orbits(g: &Hypergraph) -> Partition {
    let n = g.n();
    let mut repr: Vec<u32> = (0..n).collect(); // union-find parent by index
    fn find(repr: &mut Vec<u32>, x: u32) -> u32 {
        let mut x = x;
        while repr[x as usize] != x {
            let up = repr[repr[x as usize] as usize];
            repr[x as usize] = up;
            x = up;
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            let (ri, rj) = (find(&mut repr, i), find(&mut repr, j));
            if ri == rj {
                continue;
            }
            let mut perm: Vec<u32> = (1..=n).collect();
            perm.swap(i as usize, j as usize);
            let swapped = g.permuted(&perm).expect("transposition is a permutation");
            if swapped == *g {
                repr[rj as usize] = ri;
            }
        }
    }
    let mut classes: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for v in 0..n {
        classes.entry(find(&mut repr, v)).or_default().push(v + 1);
    }
    Partition::new(n, classes.into_values().collect::<Vec<_>>())
        .expect("union-find classes partition the ground set")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_invariant_under_relabeling() {
        let g = Hypergraph::new(5, 3, vec![vec![1, 2, 3], vec![1, 4, 5], vec![2, 4, 5]]).unwrap();
        let canon = canonical_form(&g).unwrap();
        for perm in [[2u32, 1, 3, 4, 5], [5, 4, 3, 2, 1], [3, 1, 4, 2, 5]] {
            let h = g.permuted(&perm).unwrap();
            assert_eq!(canonical_form(&h).unwrap().graph, canon.graph);
        }
    }

    #[test]
    fn canonical_relabeling_maps_input_onto_canonical_graph() {
        let g = Hypergraph::new(4, 2, vec![vec![2, 4], vec![3, 4]]).unwrap();
        let canon = canonical_form(&g).unwrap();
        assert_eq!(g.permuted(&canon.relabeling).unwrap(), canon.graph);
    }

    #[test]
    fn isomorphism_distinguishes_different_structures() {
        let path = Hypergraph::new(4, 2, vec![vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
        let star = Hypergraph::new(4, 2, vec![vec![1, 2], vec![1, 3], vec![1, 4]]).unwrap();
        assert!(!are_isomorphic(&path, &star).unwrap());
        let relabeled_path =
            Hypergraph::new(4, 2, vec![vec![3, 1], vec![1, 4], vec![4, 2]]).unwrap();
        assert!(are_isomorphic(&path, &relabeled_path).unwrap());
    }

    #[test]
    fn complete_graph_orbits_form_one_class() {
        let orbits = transposition_orbits(&Hypergraph::complete(5, 3));
        assert_eq!(orbits.parts().len(), 1);
        assert_eq!(orbits.parts()[0], (1..=5).collect::<Vec<u32>>());
    }

    #[test]
    fn orbit_classes_split_by_degree() {
        // Star with center 1: center is fixed, leaves are interchangeable.
        let star = Hypergraph::new(4, 2, vec![vec![1, 2], vec![1, 3], vec![1, 4]]).unwrap();
        let orbits = transposition_orbits(&star);
        assert_eq!(orbits.parts(), &[vec![1], vec![2, 3, 4]]);
    }

    #[test]
    fn embeds_as_subfamily_finds_relabelings() {
        let sub = Hypergraph::new(4, 2, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let host =
            Hypergraph::new(4, 2, vec![vec![1, 3], vec![2, 4], vec![1, 4]]).unwrap();
        assert!(embeds_as_subfamily(&sub, &host).unwrap().is_some());
        let too_big = Hypergraph::new(4, 2, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3]])
            .unwrap();
        // host has only 3 edges, so a 4-edge family cannot embed.
        assert!(embeds_as_subfamily(&too_big, &host).unwrap().is_none());
    }
}
