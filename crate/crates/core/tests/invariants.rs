//! Property tests over random seed trees, beyond the fixed corpus.

use num::BigInt;
use proptest::prelude::*;

use tga_core::formulas;
use tga_core::mealy::{MealyAutomaton, Word};
use tga_core::oracle;
use tga_core::schreier::SchreierMultigraph;
use tga_core::tree::OrientedTree;

/// A random tree on `k` vertices: vertex `i` attaches to a random earlier
/// vertex, with a random orientation per edge.
fn arb_tree(max_k: u32) -> impl Strategy<Value = OrientedTree> {
    (2..=max_k)
        .prop_flat_map(|k| {
            let attachments: Vec<BoxedStrategy<u32>> =
                (2..=k).map(|child| (1..child).boxed()).collect();
            (Just(k), attachments, proptest::collection::vec(any::<bool>(), (k - 1) as usize))
        })
        .prop_map(|(k, parents, flips)| {
            let edges = parents
                .into_iter()
                .zip(2..=k)
                .zip(flips)
                .map(|((parent, child), flip)| if flip { (child, parent) } else { (parent, child) })
                .collect();
            OrientedTree::from_edges(edges).expect("attachment process yields a tree")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_counts_partition_the_tree(tree in arb_tree(10)) {
        for e in 0..tree.edges().len() {
            let split = tree.split_counts(e).unwrap();
            prop_assert!(split.n_st >= 1 && split.n_ts >= 1);
            prop_assert_eq!(split.n_st + split.n_ts, tree.k());
        }
    }

    #[test]
    fn szeged_equals_wiener_on_trees(tree in arb_tree(12)) {
        prop_assert_eq!(tree.szeged(), tree.wiener());
    }

    #[test]
    fn perfect_matching_is_unique(tree in arb_tree(10)) {
        // exhaustive reference: try every subset of edges
        let m = tree.edges().len();
        let mut found = Vec::new();
        for mask in 0u32..(1 << m) {
            let mut cover = vec![0u8; tree.k() as usize + 1];
            for (e, &(u, v)) in tree.edges().iter().enumerate() {
                if mask & (1 << e) != 0 {
                    cover[u as usize] += 1;
                    cover[v as usize] += 1;
                }
            }
            if cover[1..].iter().all(|&c| c == 1) {
                found.push(mask);
            }
        }
        match tree.perfect_matching() {
            Some(pm) => {
                let mask: u32 = pm.iter().map(|&e| 1 << e).sum();
                prop_assert_eq!(found, vec![mask]);
            }
            None => prop_assert!(found.is_empty()),
        }
    }

    #[test]
    fn word_action_preserves_length_and_inverts(tree in arb_tree(8), letters in proptest::collection::vec(1u32..=8, 1..=9)) {
        prop_assume!(letters.iter().all(|&l| l <= tree.k()));
        let word = Word::new(letters);
        let automaton = MealyAutomaton::from_tree(&tree);
        let reversed = OrientedTree::from_edges(
            tree.edges().iter().map(|&(u, v)| (v, u)).collect(),
        ).unwrap();
        let inverse = MealyAutomaton::from_tree(&reversed);
        for q in automaton.edge_states() {
            let image = automaton.apply(q, &word).unwrap();
            prop_assert_eq!(image.len(), word.len());
            prop_assert_eq!(inverse.apply(q, &image).unwrap(), word.clone());
        }
    }

    #[test]
    fn graph_shape_invariants(tree in arb_tree(6), n in 1u32..=4) {
        let k = tree.k() as u64;
        prop_assume!(k.pow(n) <= 256);
        let graph = SchreierMultigraph::build(&MealyAutomaton::from_tree(&tree), n).unwrap();
        prop_assert_eq!(graph.num_vertices() as u64, k.pow(n));
        prop_assert_eq!(graph.edges().len() as u64, (k - 1) * k.pow(n));
        prop_assert!(graph.adjacency().iter().all(|nb| nb.len() as u64 == 2 * (k - 1)));
        prop_assert!(oracle::is_connected(&graph));
        prop_assert!(oracle::bipartition_loopless(&graph).is_some());
        // census matches the closed form for every generator and size
        for (&(_, i), &count) in &graph.cycle_census().unwrap() {
            prop_assert_eq!(BigInt::from(count), formulas::cycle_count_formula(k, n, i));
        }
    }

    #[test]
    fn decomposition_total_is_szeged(tree in arb_tree(7), n in 1u32..=5) {
        let total = formulas::sz_decomposition_terms(&tree, n).total();
        let formula = formulas::szeged_formula(tree.k() as u64, n, tree.szeged()).unwrap();
        prop_assert_eq!(total, formula);
    }

    #[test]
    fn json_round_trip(tree in arb_tree(5), n in 1u32..=3) {
        let graph = SchreierMultigraph::build(&MealyAutomaton::from_tree(&tree), n).unwrap();
        let back = SchreierMultigraph::from_json(&graph.to_json()).unwrap();
        prop_assert_eq!(back.k(), graph.k());
        prop_assert_eq!(back.n(), graph.n());
        prop_assert_eq!(back.edges(), graph.edges());
    }

    #[test]
    fn block_oracle_agrees_with_deletion_contraction(tree in arb_tree(4), n in 1u32..=2) {
        let graph = SchreierMultigraph::build(&MealyAutomaton::from_tree(&tree), n).unwrap();
        prop_assume!(graph.edges().len() <= 20);
        let dc = oracle::tutte_dc_oracle(&oracle::MultiGraph::from(&graph)).unwrap();
        let block = oracle::tutte_block_oracle(&graph).unwrap();
        prop_assert_eq!(dc, block.expand(20).unwrap());
    }
}
