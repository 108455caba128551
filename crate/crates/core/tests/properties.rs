//! Randomized invariants over small hypergraphs: serialization round-trips,
//! permutation equivariance, blow-up accounting, partition-score identities,
//! and safety of the domination reduction.

use itertools::Itertools;
use proptest::prelude::*;

use hyperlag::hypergraph::Hypergraph;
use hyperlag::symmetrize::{edge_goodness, FivePartition};
use hyperlag::{canon, io, lagrangian};

/// Random nonempty r-uniform hypergraph on n vertices, drawn by masking the
/// full list of r-subsets.
fn masked_graph(n: u32, r: u32) -> impl Strategy<Value = Hypergraph> {
    let all: Vec<Vec<u32>> = (1..=n).combinations(r as usize).collect();
    let count = all.len();
    proptest::collection::vec(any::<bool>(), count).prop_filter_map(
        "at least one edge",
        move |mask| {
            let edges: Vec<Vec<u32>> = all
                .iter()
                .zip(&mask)
                .filter_map(|(e, &keep)| keep.then(|| e.clone()))
                .collect();
            (!edges.is_empty())
                .then(|| Hypergraph::new(n, r, edges).expect("edges come from the r-subset list"))
        },
    )
}

fn arb_graph() -> impl Strategy<Value = Hypergraph> {
    (3u32..=8, 2u32..=3).prop_flat_map(|(n, r)| masked_graph(n, r))
}

fn arb_three_graph() -> impl Strategy<Value = Hypergraph> {
    (4u32..=8).prop_flat_map(|n| masked_graph(n, 3))
}

/// A graph together with a uniformly random relabeling of its vertices.
fn arb_graph_and_permutation() -> impl Strategy<Value = (Hypergraph, Vec<u32>)> {
    arb_graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((1..=n).collect::<Vec<u32>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_serialization_round_trips(g in arb_graph()) {
        let text = io::serialize_hypergraph(&g);
        let back = io::parse_hypergraph(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn json_serialization_round_trips(g in arb_graph()) {
        let text = io::hypergraph_to_json(&g);
        let back = io::hypergraph_from_json(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn canonical_form_ignores_vertex_labels((g, perm) in arb_graph_and_permutation()) {
        let relabeled = g.permuted(&perm).unwrap();
        let a = canon::canonical_form(&g).unwrap().graph;
        let b = canon::canonical_form(&relabeled).unwrap().graph;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn edge_polynomial_commutes_with_relabeling(
        (g, perm) in arb_graph_and_permutation(),
        raw in proptest::collection::vec(0.0f64..1.0, 8),
    ) {
        let n = g.n() as usize;
        let total: f64 = raw[..n].iter().map(|u| u + 1e-3).sum();
        let x: Vec<f64> = raw[..n].iter().map(|u| (u + 1e-3) / total).collect();
        // Push each coordinate to where its vertex went.
        let mut y = vec![0.0f64; n];
        for v in 1..=n {
            y[(perm[v - 1] - 1) as usize] = x[v - 1];
        }
        let relabeled = g.permuted(&perm).unwrap();
        let direct = lagrangian::poly_eval(&g, &x);
        let moved = lagrangian::poly_eval(&relabeled, &y);
        prop_assert!((direct - moved).abs() <= 1e-12,
            "polynomial changed under relabeling: {direct} vs {moved}");
    }

    #[test]
    fn blow_up_multiplies_counts(g in arb_graph(), t in 2u32..=3) {
        let blown = g.blow_up(t).unwrap();
        prop_assert_eq!(blown.n(), g.n() * t);
        prop_assert_eq!(
            blown.edge_count() as u64,
            g.edge_count() as u64 * (t as u64).pow(g.r())
        );
    }

    #[test]
    fn partition_score_equals_its_classification(
        g in arb_three_graph(),
        blocks in proptest::collection::vec(1u8..=5, 8),
    ) {
        let assignment = &blocks[..g.n() as usize];
        let parts = FivePartition::new(g.n(), assignment).unwrap();
        let score = edge_goodness(&g, &parts);
        prop_assert_eq!(score.sigma, score.classified_sigma());
    }

    #[test]
    fn domination_reduction_never_loses_value(g in arb_graph()) {
        let uniform = lagrangian::Weights::<f64>::uniform(g.n() as usize);
        let before = lagrangian::poly_eval(&g, uniform.values());
        let reduced = lagrangian::dominate_reduce(&g, &uniform);
        let after = lagrangian::poly_eval(&g, reduced.values());
        prop_assert!(after >= before - 1e-9,
            "reduction lowered the objective: {before} -> {after}");
    }
}
