use cycleforge::decompose::{decompose, decomposition_stats, DecompositionParams, Strategy};
use cycleforge::generators::{gen_backward_path, gen_bs_tree, gen_k_symmetric, gen_perm_superposition};
use cycleforge::oracle::{enumerate_cycles, heaviest_cycle_exact, min_decomposition_exact, OracleBudget};
use cycleforge::potential::heavy_cycle_any;
use cycleforge::weighting::apply_inverse_out_degree;
use cycleforge::Digraph;

fn budget() -> OracleBudget {
    OracleBudget::default()
}

#[test]
fn decompose_never_beats_the_optimum() {
    let mut graphs = vec![gen_k_symmetric(3).unwrap(), gen_k_symmetric(2).unwrap()];
    for seed in 0..8 {
        graphs.push(gen_perm_superposition(4 + seed as usize % 4, 2, seed).unwrap());
    }
    for g in graphs.iter().filter(|g| g.edge_count() <= 16) {
        let exact = min_decomposition_exact(g, budget()).unwrap();
        for strategy in [Strategy::Potential, Strategy::Random, Strategy::GreedyAny] {
            let d = decompose(g, &DecompositionParams { strategy, ..Default::default() }).unwrap();
            assert!(exact <= d.len());
        }
    }
}

#[test]
fn disjoint_cycles_are_decomposed_optimally() {
    let g = Digraph::from_arcs(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 3), (5, 6), (6, 5)]).unwrap();
    let d = decompose(&g, &DecompositionParams::default()).unwrap();
    assert_eq!(min_decomposition_exact(&g, budget()).unwrap(), 3);
    assert_eq!(d.len(), 3);
}

#[test]
fn k4_budget_arithmetic() {
    let g = gen_k_symmetric(3).unwrap();
    let params = DecompositionParams::default();
    let d = decompose(&g, &params).unwrap();
    let stats = decomposition_stats(&d, &g, &params).unwrap();
    let h = 4.0 * (1.0 + 0.5 + 1.0 / 3.0);
    assert!((stats.harmonic_sum - h).abs() < 1e-12);
    let budget = 4.0 * 50.0 * 3f64.ln() + 50.0 * std::f64::consts::E * h;
    assert!((stats.budget - budget).abs() < 1e-9);
    assert!(stats.cycles as f64 <= budget.min(6.0));
}

#[test]
fn backward_path_values() {
    let g5 = gen_backward_path(5).unwrap();
    assert_eq!(g5.total_weight(), 6.0);
    assert_eq!(heaviest_cycle_exact(&g5, budget()).unwrap().1, 1.0);
    let g10 = gen_backward_path(10).unwrap();
    assert_eq!(g10.total_weight(), 36.0);
    let (_, w) = heaviest_cycle_exact(&g10, budget()).unwrap();
    assert!(w <= 2.0);
    // a cycle never takes two backward arcs: after one it can only climb the path
    for c in enumerate_cycles(&g10, budget()).unwrap() {
        let back = c.edges().iter().filter(|&&e| g10.weight(e) == 1.0).count();
        assert_eq!(back, 1);
    }
}

#[test]
fn bs_tree_heavy_cycle_against_formula() {
    let tree = gen_bs_tree(2, None).unwrap();
    let h = heavy_cycle_any(&tree, None).unwrap();
    let (_, best) = heaviest_cycle_exact(&tree, budget()).unwrap();
    assert!(h.meets_bound());
    assert!(h.weight <= best + 1e-12);

    let big = gen_bs_tree(3, None).unwrap();
    let h = heavy_cycle_any(&big, None).unwrap();
    assert!(h.meets_bound());
    assert!(h.weight <= 3.0 / 9.0 + 1.0 / 3.0 + 1e-12);
    // the heaviest cycle of this family is a full root-to-leaf chain
    let (_, best) = heaviest_cycle_exact(&big, budget()).unwrap();
    assert!((best - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn heavy_cycle_dominated_on_small_graphs() {
    for seed in 0..10 {
        let mut g = gen_perm_superposition(8, 3, seed).unwrap();
        apply_inverse_out_degree(&mut g).unwrap();
        let h = heavy_cycle_any(&g, None).unwrap();
        let (_, best) = heaviest_cycle_exact(&g, budget()).unwrap();
        assert!(h.weight <= best + 1e-9);
        assert!(h.meets_bound());
    }
}
