#![allow(dead_code)]

use abundance_core::abundance::{Certificate, Step};
use rand::seq::SliceRandom;
use rand::Rng;
use abundance_core::graphs::{ColouredGraph, Graph};
use proptest::prelude::*;

pub fn load_fixture(name: &str) -> Certificate {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Applies one single-field corruption and returns a description of it.
pub fn mutate(cert: &mut Certificate, rng: &mut impl Rng) -> String {
    loop {
        let i = rng.gen_range(0..cert.nodes.len());
        let node = &mut cert.nodes[i];
        let id = node.id.clone();
        match rng.gen_range(0..5) {
            0 => {
                let v = rng.gen_range(0..node.output_graph.sigma.len());
                let c = &mut node.output_graph.sigma[v];
                *c = (*c + rng.gen_range(1..3)) % 3;
                return format!("{id}: recoloured vertex {v}");
            }
            1 if !node.output_graph.edges.is_empty() => {
                let e = rng.gen_range(0..node.output_graph.edges.len());
                node.output_graph.edges.remove(e);
                return format!("{id}: dropped edge {e}");
            }
            2 => {
                let n = node.output_graph.n;
                let absent: Vec<[usize; 2]> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| [u, v]))
                    .filter(|e| !node.output_graph.edges.contains(e))
                    .collect();
                if let Some(&e) = absent.choose(rng) {
                    node.output_graph.edges.push(e);
                    return format!("{id}: added edge {e:?}");
                }
            }
            3 => {
                if let Step::Peel { attached, colour } = &mut node.step {
                    let n = node.output_graph.n - 1;
                    let missing: Vec<usize> = (0..n).filter(|v| !attached.contains(v)).collect();
                    if !attached.is_empty() && (missing.is_empty() || rng.gen_bool(0.5)) {
                        let k = rng.gen_range(0..attached.len());
                        attached.remove(k);
                        return format!("{id}: detached one vertex");
                    } else if let Some(&v) = missing.choose(rng) {
                        attached.push(v);
                        return format!("{id}: attached vertex {v}");
                    }
                    *colour = (*colour + 1) % 3;
                    return format!("{id}: changed peel colour");
                }
            }
            _ => {
                if let Step::GlueBlowup { edge, u_set, v_set } = &mut node.step {
                    match rng.gen_range(0..3) {
                        0 => {
                            edge.swap(0, 1);
                            return format!("{id}: swapped glue edge");
                        }
                        1 if !u_set.is_empty() => {
                            u_set.pop();
                            return format!("{id}: shrank u_set");
                        }
                        _ => {
                            v_set[0] += 1;
                            return format!("{id}: moved v_set");
                        }
                    }
                }
            }
        }
    }
}

/// Properly K3-coloured graphs on at most `max_n` vertices.
pub fn coloured_graph(max_n: usize) -> impl Strategy<Value = ColouredGraph> {
    (1..=max_n)
        .prop_flat_map(|n| (prop::collection::vec(0..3usize, n), prop::collection::vec(any::<bool>(), n * n)))
        .prop_map(|(sigma, bits)| {
            let n = sigma.len();
            let edges = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| sigma[u] != sigma[v] && bits[u * n + v]);
            ColouredGraph::new(Graph::new(n, edges).unwrap(), Graph::complete(3), sigma).unwrap()
        })
}

/// Graphs on at most `max_n` vertices.
pub fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * n)))
        .prop_map(|(n, bits)| Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| bits[u * n + v])).unwrap())
}
