//! Hypergraph homomorphisms.
//!
//! A homomorphism maps the vertices of a pattern into a target so the image
//! of every pattern edge is a target edge. Since edges of an `r`-uniform
//! graph are sets of exactly `r` distinct vertices, the map is forced to be
//! injective on each edge (but not globally).
//!
//! Besides the generic backtracking finder, this module has a specialized
//! check for the 15-vertex pattern consisting of two disjoint triples plus,
//! for each of the nine cross pairs, an edge through a private extra vertex.
//! That pattern maps into `G` exactly when `G` has two disjoint edges `A`,
//! `B` such that every pair `(a, b)` with `a ∈ A`, `b ∈ B` lies inside some
//! edge of `G` — which is what the fast path tests directly.

use itertools::Itertools;
use thiserror::Error;

use crate::hypergraph::Hypergraph;

/// Errors from homomorphism search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    /// The generic finder is exhaustive and guards the pattern size.
    #[error("pattern has {n} vertices, above the search guard {guard}")]
    PatternTooLarge { n: u32, guard: u32 },
    /// Patterns can only map onto edges of the same size.
    #[error("pattern is {pattern_r}-uniform but target is {target_r}-uniform")]
    UniformityMismatch { pattern_r: u32, target_r: u32 },
}

const PATTERN_GUARD: u32 = 16;

/// Searches for a homomorphism from `pattern` into `target`.
///
/// Returns the vertex map (`map[v - 1]` = image of pattern vertex `v`) or
/// `None`. Pattern vertices outside every edge are sent to vertex 1 (or are
/// unconstrained when the target has no vertices, in which case only an
/// edgeless pattern maps).
pub fn find_homomorphism(
    pattern: &Hypergraph,
    target: &Hypergraph,
) -> Result<Option<Vec<u32>>, HomError> {
    if pattern.n() > PATTERN_GUARD {
        return Err(HomError::PatternTooLarge { n: pattern.n(), guard: PATTERN_GUARD });
    }
    if pattern.r() != target.r() && pattern.edge_count() > 0 {
        return Err(HomError::UniformityMismatch {
            pattern_r: pattern.r(),
            target_r: target.r(),
        });
    }
    if pattern.edge_count() > 0 && target.edge_count() == 0 {
        return Ok(None);
    }

    // Order pattern edges greedily: repeatedly take the edge sharing the most
    // vertices with already-ordered edges, so each new edge is maximally
    // constrained when the backtracking reaches it.
    let edges: Vec<&[u32]> = pattern.edges().collect();
    let mut order: Vec<usize> = Vec::with_capacity(edges.len());
    let mut placed = vec![false; pattern.n() as usize];
    let mut used = vec![false; edges.len()];
    for _ in 0..edges.len() {
        let (next, _) = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, e)| (i, e.iter().filter(|&&v| placed[v as usize - 1]).count()))
            .max_by_key(|&(i, score)| (score, std::cmp::Reverse(i)))
            .expect("an unused edge remains");
        used[next] = true;
        for &v in edges[next] {
            placed[v as usize - 1] = true;
        }
        order.push(next);
    }

    let target_edges: Vec<&[u32]> = target.edges().collect();
    let mut assignment: Vec<Option<u32>> = vec![None; pattern.n() as usize];

    fn assign_edge(
        depth: usize,
        order: &[usize],
        edges: &[&[u32]],
        target_edges: &[&[u32]],
        assignment: &mut Vec<Option<u32>>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let e = edges[order[depth]];
        for f in target_edges {
            // Try every bijection of this pattern edge onto the target edge
            // consistent with what is already assigned.
            for image in f.iter().permutations(f.len()) {
                let ok = e
                    .iter()
                    .zip(&image)
                    .all(|(&pv, &&tv)| assignment[pv as usize - 1].map_or(true, |a| a == tv));
                if !ok {
                    continue;
                }
                let mut touched = Vec::new();
                for (&pv, &&tv) in e.iter().zip(&image) {
                    if assignment[pv as usize - 1].is_none() {
                        assignment[pv as usize - 1] = Some(tv);
                        touched.push(pv);
                    }
                }
                if assign_edge(depth + 1, order, edges, target_edges, assignment) {
                    return true;
                }
                for pv in touched {
                    assignment[pv as usize - 1] = None;
                }
            }
        }
        false
    }

    if !assign_edge(0, &order, &edges, &target_edges, &mut assignment) {
        return Ok(None);
    }
    let fallback = 1u32; // image of isolated pattern vertices
    Ok(Some(
        assignment.into_iter().map(|a| a.unwrap_or(fallback)).collect(),
    ))
}

/// Fast check for the two-sided pattern described in the module docs.
///
/// `g` must be 3-uniform with at most 128 vertices. Quadratic in the number
/// of edges; intended for graphs up to a few thousand edges.
pub fn contains_k333_hom(g: &Hypergraph) -> bool {
    assert_eq!(g.r(), 3, "the two-sided pattern check needs a 3-uniform graph");
    let masks = g.edge_masks();
    if masks.len() < 2 {
        return false;
    }
    // row[v] = the vertices lying in a common edge with v, as a bitmask, so
    // the partners common to a whole edge come from three AND operations.
    let n = g.n() as usize;
    let mut row = vec![0u128; n];
    for e in g.edges() {
        for (i, &a) in e.iter().enumerate() {
            for &b in &e[i + 1..] {
                row[a as usize - 1] |= 1u128 << (b - 1);
                row[b as usize - 1] |= 1u128 << (a - 1);
            }
        }
    }
    let edges: Vec<&[u32]> = g.edges().collect();
    for i in 0..edges.len() {
        let e = edges[i];
        let partners =
            row[e[0] as usize - 1] & row[e[1] as usize - 1] & row[e[2] as usize - 1] & !masks[i];
        if partners.count_ones() < 3 {
            continue;
        }
        // Covering all nine cross pairs is symmetric, so scanning ordered
        // pairs once suffices: the other edge must avoid this one and sit
        // inside its common-partner set.
        for j in 0..edges.len() {
            if masks[i] & masks[j] == 0 && masks[j] & !partners == 0 {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Hypergraph {
        let edges: Vec<Vec<u32>> = (1..=n)
            .map(|v| {
                let w = if v == n { 1 } else { v + 1 };
                vec![v.min(w), v.max(w)]
            })
            .collect();
        Hypergraph::new(n, 2, edges).unwrap()
    }

    #[test]
    fn triangle_maps_into_larger_clique_but_not_into_square() {
        let triangle = cycle(3);
        let k4 = Hypergraph::complete(4, 2);
        assert!(find_homomorphism(&triangle, &k4).unwrap().is_some());
        // A 4-cycle is bipartite, so the triangle cannot map into it.
        assert!(find_homomorphism(&triangle, &cycle(4)).unwrap().is_none());
    }

    #[test]
    fn homomorphism_map_sends_edges_onto_edges() {
        let pattern = Hypergraph::new(4, 2, vec![vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
        let target = cycle(5);
        let map = find_homomorphism(&pattern, &target).unwrap().unwrap();
        for e in pattern.edges() {
            let image: Vec<u32> = e.iter().map(|&v| map[v as usize - 1]).collect();
            assert!(target.contains_edge(&image), "image {image:?} must be a target edge");
        }
    }

    #[test]
    fn isolated_pattern_vertices_are_unconstrained() {
        let pattern = Hypergraph::new(3, 2, vec![vec![1, 2]]).unwrap();
        let target = Hypergraph::new(2, 2, vec![vec![1, 2]]).unwrap();
        let map = find_homomorphism(&pattern, &target).unwrap().unwrap();
        assert_ne!(map[0], map[1]);
    }

    #[test]
    fn uniformity_mismatch_is_an_error() {
        let pattern = Hypergraph::new(3, 3, vec![vec![1, 2, 3]]).unwrap();
        let target = Hypergraph::new(3, 2, vec![vec![1, 2]]).unwrap();
        assert!(matches!(
            find_homomorphism(&pattern, &target),
            Err(HomError::UniformityMismatch { .. })
        ));
    }

    #[test]
    fn pattern_guard_rejects_large_patterns() {
        let big = Hypergraph::empty(17, 3);
        assert!(matches!(
            find_homomorphism(&big, &Hypergraph::complete(5, 3)),
            Err(HomError::PatternTooLarge { .. })
        ));
    }

    #[test]
    fn complete_six_contains_the_two_sided_pattern() {
        assert!(contains_k333_hom(&Hypergraph::complete(6, 3)));
    }

    #[test]
    fn intersecting_graphs_never_contain_the_pattern() {
        // No two disjoint edges exist at all.
        assert!(!contains_k333_hom(&Hypergraph::complete(5, 3)));
    }

    #[test]
    fn disjoint_edges_without_cross_cover_do_not_count() {
        let g = Hypergraph::new(6, 3, vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert!(!contains_k333_hom(&g));
    }
}
