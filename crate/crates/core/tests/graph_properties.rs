use cycleforge::decompose::{decompose, verify_decomposition, DecompositionParams, Strategy as Peel};
use cycleforge::generators::{gen_k4_chain, gen_k_symmetric};
use cycleforge::graph::{cycle_through, sink_scc, Cycle, DegreeSummary};
use cycleforge::{Digraph, VertexId};
use proptest::prelude::*;

/// Balanced multigraph built as a union of random closed vertex sequences.
fn balanced_graph() -> impl Strategy<Value = Digraph> {
    (2usize..10).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0..n, 2..6), 1..8).prop_map(move |walks| {
            let mut arcs = Vec::new();
            for w in walks {
                for i in 0..w.len() {
                    let (u, v) = (w[i], w[(i + 1) % w.len()]);
                    if u != v {
                        arcs.push((u, v));
                    }
                }
            }
            Digraph::from_arcs(n, arcs).unwrap()
        })
    })
}

fn strategy_of(i: u8) -> Peel {
    [Peel::Potential, Peel::Random, Peel::GreedyAny][i as usize % 3]
}

#[test]
fn degree_examples() {
    let tri = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    assert_eq!(tri.degrees(), DegreeSummary { min_degree: 1, max_degree: 1, avg_out: 1.0 });
    let k4 = gen_k_symmetric(3).unwrap();
    assert_eq!(k4.degrees(), DegreeSummary { min_degree: 3, max_degree: 3, avg_out: 3.0 });
    let digon = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
    assert_eq!(digon.degrees(), DegreeSummary { min_degree: 1, max_degree: 1, avg_out: 1.0 });
    assert_eq!(Digraph::new(0).degrees(), DegreeSummary { min_degree: 0, max_degree: 0, avg_out: 0.0 });
}

#[test]
fn balance_and_euler_examples() {
    assert!(gen_k_symmetric(3).unwrap().is_balanced());
    assert!(!Digraph::from_arcs(2, [(0, 1)]).unwrap().is_balanced());
    assert!(gen_k4_chain(2).unwrap().is_balanced());
    assert!(gen_k4_chain(3).unwrap().is_eulerian());
    let two = Digraph::from_arcs(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
    assert!(two.is_balanced() && !two.is_eulerian());
}

#[test]
fn removing_a_digon_from_k4() {
    let mut g = gen_k_symmetric(3).unwrap();
    let digon = Cycle::from_vertices(&g, &[VertexId(0), VertexId(1)]).unwrap();
    g.remove_cycle(&digon).unwrap();
    assert_eq!(g.edge_count(), 10);
    assert!(g.is_balanced());
    assert!(g.remove_cycle(&digon).is_err());

    let mut tri = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    let c = cycle_through(&tri, VertexId(1)).unwrap();
    tri.remove_cycle(&c).unwrap();
    assert!(tri.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cycle_through_every_vertex(g in balanced_graph()) {
        for v in g.vertices().filter(|&v| g.out_degree(v) > 0) {
            let c = cycle_through(&g, v).unwrap();
            prop_assert!(c.contains(v));
            let checked = Cycle::from_edges(&g, c.edges().to_vec()).unwrap();
            prop_assert_eq!(checked.vertices(), c.vertices());
        }
    }

    #[test]
    fn peeling_keeps_balance(g in balanced_graph()) {
        let mut res = g.clone();
        while let Some(v) = res.vertices().find(|&v| res.out_degree(v) > 0) {
            let c = cycle_through(&res, v).unwrap();
            res.remove_cycle(&c).unwrap();
            prop_assert!(res.is_balanced());
        }
    }

    #[test]
    fn sink_component_has_no_exit(
        n in 2usize..12,
        raw in prop::collection::vec((0usize..12, 0usize..12), 1..30),
    ) {
        let arcs: Vec<_> = raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
        let g = Digraph::from_arcs(n, arcs).unwrap();
        let sink = sink_scc(&g).unwrap();
        prop_assert!(!sink.is_empty());
        for (_, a) in g.edges() {
            prop_assert!(!(sink.contains(&a.tail) && !sink.contains(&a.head)));
        }
    }

    #[test]
    fn decompositions_partition_the_arcs(g in balanced_graph(), s in 0u8..3, seed in 0u64..1000, small_mu in any::<bool>()) {
        let params = DecompositionParams {
            strategy: strategy_of(s),
            seed,
            mu: small_mu.then_some(1.0),
            ..Default::default()
        };
        let d = decompose(&g, &params).unwrap();
        prop_assert!(verify_decomposition(&d, &g).is_ok());
        prop_assert!(d.len() <= g.edge_count());
    }
}
