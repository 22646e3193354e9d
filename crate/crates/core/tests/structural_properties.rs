mod common;

use common::*;
use proptest::prelude::*;
use reqplex::structural::{cyclomatic_complexity, density, density_delta, load};
use reqplex::WeightedGraph;

#[test]
fn cycle_counts_match_spanning_forest() {
    let mut r = rng(2024);
    for _ in 0..200 {
        let g = random_graph(&mut r, 10);
        let extra = non_forest_edges(&g);
        let p = dfs_component_count(&g) as i64;
        assert_eq!(load(&g), extra);
        assert_eq!(cyclomatic_complexity(&g), extra as i64 + p);
    }
}

#[test]
fn trees_have_zero_density_delta() {
    let mut r = rng(99);
    for i in 0..50 {
        let g = random_tree(&mut r, 2 + i % 15);
        assert_eq!(density_delta(&g).unwrap(), 0.0, "tree on {} nodes", g.node_count());
    }
}

fn connected_graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..10, any::<u64>(), 0.0f64..1.0).prop_map(|(n, seed, p)| {
        use rand::Rng;
        let mut r = rng(seed);
        let mut edges: Vec<_> = (1..n).map(|i| (r.random_range(0..i), i)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if !edges.contains(&(i, j)) && r.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        WeightedGraph::from_edges(n, &edges).unwrap()
    })
}

proptest! {
    #[test]
    fn connected_load_is_cc_minus_one(g in connected_graph()) {
        prop_assert_eq!(load(&g) as i64, cyclomatic_complexity(&g) - 1);
        prop_assert!(density_delta(&g).unwrap() >= -1e-15);
    }

    #[test]
    fn density_grows_with_edges(g in connected_graph()) {
        let n = g.node_count();
        let before = density(&g).unwrap();
        let existing: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        if let Some(extra) = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|p| !existing.contains(p)) {
            let mut all = existing.clone();
            all.push(extra);
            let after = density(&WeightedGraph::from_edges(n, &all).unwrap()).unwrap();
            prop_assert!(after >= before);
        }
        prop_assert!((0.0..=1.0).contains(&before));
    }
}
