mod common;

use abundance_core::abundance::{peel_order_search, splittable_decompose, Certificate, Step, Violation};
use abundance_core::graphs::{ColouredGraph, Graph};
use common::{load_fixture, mutate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn k3_coloured(host: Graph, sigma: &[usize]) -> ColouredGraph {
    ColouredGraph::new(host, Graph::complete(3), sigma.to_vec()).unwrap()
}

#[test]
fn c5_fixture_rebuilds_the_coloured_cycle() {
    let cert = load_fixture("fig1_c5.json");
    let root = cert.verify().unwrap();
    assert_eq!(root, k3_coloured(Graph::cycle(5), &[0, 1, 2, 0, 2]));
    let hist = abundance_core::abundance::step_histogram(&cert);
    assert_eq!(hist["Atom"], 1);
    assert_eq!(hist["Peel"], 3);
}

#[test]
fn petersen_fixture_rebuilds_the_coloured_petersen_graph() {
    let cert = load_fixture("fig2_petersen.json");
    let root = cert.verify().unwrap();
    assert_eq!(root.host(), &Graph::petersen());
    assert_eq!(root.sigma(), &[1, 0, 1, 0, 2, 0, 1, 2, 2, 0]);
    let hist = abundance_core::abundance::step_histogram(&cert);
    assert_eq!(hist["GlueBlowup"], 3);
    // The final peel attaches the top vertex to three same-coloured vertices.
    let top = cert.node("top").unwrap();
    assert!(matches!(&top.step, Step::Peel { attached, .. } if attached.len() == 3));
}

#[test]
fn peeling_from_two_colours_is_rejected() {
    let mut cert = load_fixture("fig1_c5.json");
    let node = cert.nodes.iter_mut().find(|n| n.id == "add3").unwrap();
    // Vertex 0 has colour 0 while the existing attachments have colour 2.
    if let Step::Peel { attached, .. } = &mut node.step {
        attached[0] = 0;
    }
    let err = cert.verify().unwrap_err();
    assert_eq!(err.node, "add3");
    assert_eq!(err.violation, Violation::PeelNotMonochromatic);
}

#[test]
fn seeded_mutations_are_rejected_with_node_ids() {
    for name in ["fig1_c5.json", "fig2_petersen.json"] {
        let base = load_fixture(name);
        let ids: Vec<String> = base.nodes.iter().map(|n| n.id.clone()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut cert = base.clone();
            let what = mutate(&mut cert, &mut rng);
            let err = cert.verify().expect_err(&what);
            assert!(ids.contains(&err.node), "{what}: {err}");
        }
    }
}

#[test]
fn fixtures_round_trip_through_json() {
    for name in ["fig1_c5.json", "fig2_petersen.json"] {
        let cert = load_fixture(name);
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
    }
}

#[test]
fn searches_find_the_fixture_graphs() {
    let c5 = load_fixture("fig1_c5.json").verify().unwrap();
    assert_eq!(peel_order_search(&c5).unwrap().certificate.verify().unwrap(), c5);
    assert_eq!(splittable_decompose(&c5).unwrap().unwrap().verify().unwrap(), c5);
    // Every vertex of the coloured Petersen graph sees two colours.
    let petersen = load_fixture("fig2_petersen.json").verify().unwrap();
    assert!(peel_order_search(&petersen).is_none());
}
