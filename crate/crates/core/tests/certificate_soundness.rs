use tdforge::certificates::{bag_lower_bound, reflected_matching, verify_certificate};
use tdforge::constructions::reflected_tree;
use tdforge::search::{enumerate_spanning_trees, min_width_on_tree};

#[test]
fn every_anchored_witness_on_g2_respects_the_hub_bound() {
    let rt = reflected_tree(2).unwrap();
    let g = rt.graph();
    let mut witnesses = 0;
    for t in enumerate_spanning_trees(g).unwrap() {
        let cert = reflected_matching(&rt, &t).unwrap();
        assert!(verify_certificate(&rt, &cert).valid);
        assert_eq!(cert.matching.len(), 1);
        for budget in 0..=3 {
            if let Some(td) = min_width_on_tree(g, &t, budget, true).unwrap().witness {
                let bound = bag_lower_bound(&rt, &cert, &td).unwrap();
                assert!(bound.bag_size >= 1);
                assert_eq!(bound.forced.len(), 1);
                witnesses += 1;
            }
        }
    }
    assert!(witnesses > 0);
}

#[test]
fn tampered_certificates_are_rejected() {
    let rt = reflected_tree(3).unwrap();
    let t = enumerate_spanning_trees(rt.graph()).unwrap().nth(17).unwrap();
    let cert = reflected_matching(&rt, &t).unwrap();
    let mut bad = cert.clone();
    bad.matching.pop();
    assert!(!verify_certificate(&rt, &bad).valid);
    let mut bad = cert.clone();
    bad.hub = "L.L.o".into();
    if bad.hub != cert.hub {
        assert!(!verify_certificate(&rt, &bad).valid);
    }
    let mut bad = cert;
    bad.level = 4;
    assert!(!verify_certificate(&rt, &bad).valid);
}
