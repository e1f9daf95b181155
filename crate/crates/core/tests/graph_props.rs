use abundance_core::graphs::{cycle_basis, enumerate_cycles, hom_exists, ColouredGraph, Graph, HomSearch, LineHom};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{coloured_graph, graph};

/// Random walk of up to `len` steps from a random vertex with an edge.
fn random_walk(g: &ColouredGraph, len: usize, rng: &mut impl Rng) -> Option<Vec<usize>> {
    let host = g.host();
    let starts: Vec<usize> = (0..host.n()).filter(|&v| host.degree(v) > 0).collect();
    let mut walk = vec![*starts.get(rng.gen_range(0..starts.len().max(1)))?];
    for _ in 0..len {
        let nb = host.neighbours(*walk.last().unwrap());
        walk.push(nb[rng.gen_range(0..nb.len())]);
    }
    Some(walk)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn wrap_is_additive_and_antisymmetric(g in coloured_graph(9), seed in any::<u64>(), len in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(walk) = random_walk(&g, len, &mut rng) else { return Ok(()) };
        let cut = rng.gen_range(0..walk.len());
        let whole = g.wrap(&walk).unwrap();
        prop_assert_eq!(whole, g.wrap(&walk[..=cut]).unwrap() + g.wrap(&walk[cut..]).unwrap());
        let back: Vec<usize> = walk.iter().rev().copied().collect();
        prop_assert_eq!(g.wrap(&back).unwrap(), -whole);
        prop_assert_eq!(whole.unsigned_abs() as usize % 2, (walk.len() - 1) % 2);
    }

    #[test]
    fn closed_walks_wrap_by_multiples_of_three(g in coloured_graph(9), seed in any::<u64>(), len in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(mut walk) = random_walk(&g, len, &mut rng) else { return Ok(()) };
        let back: Vec<usize> = walk.iter().rev().skip(1).copied().collect();
        // Go out and come back, then splice in any cycle through the start.
        walk.extend(back);
        prop_assert_eq!(g.wrap(&walk).unwrap(), 0);
        for c in enumerate_cycles(g.host(), 200, 10).cycles {
            prop_assert_eq!(g.cycle_wrap(&c).unwrap().rem_euclid(3), 0);
        }
    }

    #[test]
    fn line_hom_iff_no_wrapped_cycle(g in coloured_graph(10)) {
        let list = enumerate_cycles(g.host(), usize::MAX, g.host().n());
        prop_assert!(!list.truncated);
        let wrapped = list.cycles.iter().any(|c| g.cycle_wrap(c).unwrap() != 0);
        match g.hom_to_coloured_line().unwrap() {
            LineHom::Levels(levels) => {
                prop_assert!(!wrapped);
                for &(u, v) in g.host().edges() {
                    prop_assert_eq!((levels[u] - levels[v]).abs(), 1);
                }
            }
            LineHom::Wrapped { cycle, wrap } => {
                prop_assert!(wrapped);
                prop_assert_ne!(wrap, 0);
                prop_assert_eq!(g.cycle_wrap(&cycle).unwrap(), wrap);
            }
        }
    }

    #[test]
    fn blow_up_keeps_a_colour_hom(g in coloured_graph(6), sizes in prop::collection::vec(1usize..4, 6)) {
        let sizes = &sizes[..g.host().n()];
        let b = g.blow_up(sizes).unwrap();
        prop_assert_eq!(b.host().n(), sizes.iter().sum::<usize>());
        for &(u, v) in b.host().edges() {
            prop_assert!(b.pattern().has_edge(b.colour(u), b.colour(v)));
        }
        prop_assert!(matches!(hom_exists(b.host(), g.pattern(), 1_000_000), HomSearch::Found(_)));
    }

    #[test]
    fn cycle_basis_has_cyclomatic_size(g in graph(12)) {
        let (_, components) = g.components();
        let basis = cycle_basis(&g);
        prop_assert_eq!(basis.len() + g.n(), g.edge_count() + components);
        for c in &basis {
            prop_assert!(abundance_core::graphs::is_cycle_of(&g, c));
        }
    }

    #[test]
    fn two_colouring_iff_hom_to_an_edge(g in graph(10)) {
        let hom = hom_exists(&g, &Graph::complete(2), 1_000_000).is_found();
        match g.two_colouring() {
            Some(side) => {
                prop_assert!(hom);
                for &(u, v) in g.edges() {
                    prop_assert_ne!(side[u], side[v]);
                }
            }
            None => prop_assert!(!hom),
        }
    }
}
