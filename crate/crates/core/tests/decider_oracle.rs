mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdforge::constructions::reflected_tree;
use tdforge::decomposition::{is_anchored, validate};
use tdforge::generate::{random_connected_graph, random_spanning_tree};
use tdforge::search::{enumerate_spanning_trees, min_width_on_tree};

#[test]
fn reflected_level_three_agrees_with_oracle() {
    let rt = reflected_tree(3).unwrap();
    let g = rt.graph();
    for t in enumerate_spanning_trees(g).unwrap() {
        let truth = common::naive_min_width(g, &t, true, 2);
        for budget in 0..=2 {
            let got = min_width_on_tree(g, &t, budget, true).unwrap().is_sat();
            assert_eq!(got, truth <= budget, "budget {budget} on {t:?}, oracle {truth}");
        }
    }
}

#[test]
fn witnesses_are_valid_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..60 {
        let n = rng.gen_range(2..=8);
        let g = random_connected_graph(n, rng.gen_range(0.2..0.7), &mut rng);
        let t = random_spanning_tree(&g, &mut rng);
        let mut prev = [false, false];
        for budget in 0..=4 {
            for (slot, anchored) in [false, true].into_iter().enumerate() {
                let r = min_width_on_tree(&g, &t, budget, anchored).unwrap();
                assert!(!prev[slot] || r.is_sat(), "SAT at {} but not at {budget}", budget - 1);
                prev[slot] = r.is_sat();
                if let Some(td) = &r.witness {
                    assert!(validate(&g, td).unwrap().valid);
                    assert!(td.width() <= budget as i64);
                    assert!(!anchored || is_anchored(&g, td).unwrap());
                }
            }
            // an anchored decomposition is in particular a decomposition
            assert!(!prev[1] || prev[0]);
        }
    }
}
