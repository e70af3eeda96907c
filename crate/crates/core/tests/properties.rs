//! Randomized properties across modules.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tdforge::decomposition::{is_anchored, validate, TreeDecomposition};
use tdforge::generate::{
    random_connected_graph, random_decomposition, random_minor_model, random_spanning_tree, random_toy_instance,
};
use tdforge::graph::is_spanning_tree;
use tdforge::search::{count_spanning_trees, count_spanning_trees_with, enumerate_spanning_trees, SpanningTreeSampler};
use tdforge::transforms::{complete_model, minor_to_spanning, reduce_to_anchored, validate_model, MinorModelJson};
use tdforge::Graph;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_the_determinant(seed in any::<u64>(), n in 1usize..8, p in 0.2f64..0.8) {
        let g = random_connected_graph(n, p, &mut rng(seed));
        let trees: Vec<Graph> = enumerate_spanning_trees(&g).unwrap().collect();
        let distinct: BTreeSet<Vec<(usize, usize)>> = trees.iter().map(|t| t.edges().to_vec()).collect();
        prop_assert_eq!(distinct.len(), trees.len());
        prop_assert!(trees.iter().all(|t| is_spanning_tree(&g, t)));
        let count = count_spanning_trees(&g).unwrap();
        prop_assert_eq!(&count, &BigInt::from(trees.len()));
        prop_assert_eq!(count_spanning_trees_with(&g, 0, true).unwrap(), count);
    }

    #[test]
    fn sampler_is_seeded_and_spanning(seed in any::<u64>(), n in 2usize..10) {
        let g = random_connected_graph(n, 0.5, &mut rng(seed));
        let a: Vec<Graph> = SpanningTreeSampler::new(&g, seed).unwrap().take(5).collect();
        let b: Vec<Graph> = SpanningTreeSampler::new(&g, seed).unwrap().take(5).collect();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.iter().all(|t| is_spanning_tree(&g, t)));
    }

    #[test]
    fn completed_models_cover_and_stay_valid(seed in any::<u64>(), n in 1usize..12) {
        let mut r = rng(seed);
        let g = random_connected_graph(n, 0.35, &mut r);
        let m = random_minor_model(&g, 0.4, true, &mut r);
        prop_assert!(validate_model(&m).valid);
        let c = complete_model(&m).unwrap();
        prop_assert!(validate_model(&c).valid);
        prop_assert!(c.is_covering());
        for (x, q) in m.branch_sets() {
            prop_assert!(q.is_subset(&c.branch_set(&x).unwrap()));
        }
    }

    #[test]
    fn minor_to_spanning_preserves_width(seed in any::<u64>(), n in 1usize..12) {
        let mut r = rng(seed);
        let g = random_connected_graph(n, 0.3, &mut r);
        let m = random_minor_model(&g, 0.5, true, &mut r);
        let td = random_decomposition(&g, m.pattern(), &mut r);
        let out = minor_to_spanning(&g, &td, &m).unwrap();
        prop_assert!(validate(&g, &out).unwrap().valid);
        prop_assert!(is_spanning_tree(&g, out.host()));
        prop_assert_eq!(out.width(), td.width());
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), n in 1usize..10) {
        let mut r = rng(seed);
        let g = random_connected_graph(n, 0.4, &mut r);
        let back: Graph = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(&back, &g);
        let t = random_spanning_tree(&g, &mut r);
        let td = random_decomposition(&g, &t, &mut r);
        let back: TreeDecomposition = serde_json::from_str(&serde_json::to_string(&td).unwrap()).unwrap();
        prop_assert_eq!(&back, &td);
        let m = random_minor_model(&g, 0.5, false, &mut r);
        let json = serde_json::to_string(&MinorModelJson::from(&m)).unwrap();
        let back = serde_json::from_str::<MinorModelJson>(&json).unwrap().into_model(&g).unwrap();
        prop_assert_eq!(back.branch_sets(), m.branch_sets());
    }
}

#[test]
fn reductions_are_anchored_or_reported() {
    let mut r = rng(2024);
    for _ in 0..40 {
        let inst = random_toy_instance(1, 4, 24, &mut r);
        let instance_json = serde_json::to_string(&inst).unwrap();
        assert_eq!(serde_json::from_str::<tdforge::constructions::GadgetInstance>(&instance_json).unwrap(), inst);
        let t = random_spanning_tree(&inst.graph, &mut r);
        let td = random_decomposition(&inst.graph, &t, &mut r);
        match reduce_to_anchored(&inst, &td) {
            Ok(red) => {
                assert!(red.report.valid);
                assert!(is_anchored(&inst.base, &red.decomposition).unwrap());
                assert!(red.output_width <= red.input_width + 1);
                assert!(red.warnings.iter().any(|w| w.contains("toy")));
            }
            Err(tdforge::transforms::TransformError::ReductionInvalid(red)) => assert!(!red.report.valid),
            Err(e) => panic!("unexpected {e}"),
        }
    }
}
