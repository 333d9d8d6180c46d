//! Peeling a balanced digraph into edge-disjoint cycles.
//!
//! Each round looks at the residual graph `G_t`. If its minimum degree `δ`
//! is below `μ`, a cycle through a minimum-degree vertex is removed;
//! otherwise a cycle with large inverse-degree weight `Σ 1/d_out(v)` is
//! found by the chosen strategy and removed. Every arc leaving `v` is
//! removed while `v` has some out-degree `i` and contributes `1/i`, so the
//! inverse-degree weights of all removed cycles add up to `Σ_v H(d_out(v))`.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{cycle_through, Cycle, Digraph, EdgeId, VertexId, WEIGHT_EPS};
use crate::potential::{close_heavy_cycle, potential_path_in, PotentialParams};
use crate::random_walk::{close_cycle_in, random_path_in, rng_for};
use crate::view::NeighbourView;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Potential,
    Random,
    GreedyAny,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Potential => "potential",
            Strategy::Random => "random",
            Strategy::GreedyAny => "greedy_any",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionParams {
    /// Degree threshold; `None` means `50 ln Δ(G_t)`, recomputed each round.
    pub mu: Option<f64>,
    pub xi: f64,
    pub strategy: Strategy,
    pub seed: u64,
}

impl Default for DecompositionParams {
    fn default() -> Self {
        DecompositionParams {
            mu: None,
            xi: 1.0 / (50.0 * std::f64::consts::E),
            strategy: Strategy::Potential,
            seed: 0,
        }
    }
}

impl DecompositionParams {
    fn validate(&self) -> Result<()> {
        if let Some(mu) = self.mu {
            if !(mu.is_finite() && mu >= 0.0) {
                return Err(Error::InvalidParameter(format!("mu {mu}")));
            }
        }
        if !(self.xi.is_finite() && self.xi > 0.0) {
            return Err(Error::InvalidParameter(format!("xi {}", self.xi)));
        }
        Ok(())
    }

    /// `μ` for a graph of maximum degree `delta`.
    pub fn mu_for(&self, delta: usize) -> f64 {
        self.mu.unwrap_or_else(|| 50.0 * (delta.max(1) as f64).ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseTag {
    MinDegree,
    Heavy,
    SelfLoop,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::MinDegree => "min_degree",
            CaseTag::Heavy => "heavy",
            CaseTag::SelfLoop => "self_loop",
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        match s {
            "min_degree" => Some(CaseTag::MinDegree),
            "heavy" => Some(CaseTag::Heavy),
            "self_loop" => Some(CaseTag::SelfLoop),
            _ => None,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct TaggedCycle {
    pub cycle: Cycle,
    pub tag: CaseTag,
    /// `Σ 1/d_out(v)` over the cycle, in the residual graph it was taken from.
    pub inv_weight: f64,
}

/// Residual-graph facts at the moment a cycle was removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeelRecord {
    pub delta: usize,
    /// The minimum-degree vertex the round looked at.
    pub delta_vertex: VertexId,
    pub max_degree: usize,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct CycleDecomposition {
    pub cycles: Vec<TaggedCycle>,
    /// One record per cycle, aligned with `cycles`.
    pub peels: Vec<PeelRecord>,
    /// Heavy cycles whose inverse-degree weight fell short of `ξ`.
    pub heavy_shortfalls: usize,
    pub elapsed: Duration,
}

impl CycleDecomposition {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn plain_cycles(&self) -> Vec<Cycle> {
        self.cycles.iter().map(|t| t.cycle.clone()).collect()
    }

    pub fn count(&self, tag: CaseTag) -> usize {
        self.cycles.iter().filter(|t| t.tag == tag).count()
    }
}

/// Vertices keyed by degree; in a balanced graph in- and out-degree agree.
struct DegreeBuckets {
    set: BTreeSet<(usize, VertexId)>,
    degree: Vec<usize>,
}

impl DegreeBuckets {
    fn new(g: &Digraph) -> Self {
        let degree: Vec<usize> = g.vertices().map(|v| g.out_degree(v)).collect();
        let set = g.vertices().filter(|&v| degree[v.0] > 0).map(|v| (degree[v.0], v)).collect();
        DegreeBuckets { set, degree }
    }

    fn min(&self) -> Option<(usize, VertexId)> {
        self.set.first().copied()
    }

    fn max(&self) -> Option<(usize, VertexId)> {
        // largest degree, smallest id among those
        let &(top, _) = self.set.last()?;
        self.set.range((top, VertexId(0))..).next().copied()
    }

    fn refresh(&mut self, v: VertexId, d: usize) {
        self.set.remove(&(self.degree[v.0], v));
        self.degree[v.0] = d;
        if d > 0 {
            self.set.insert((d, v));
        }
    }
}

fn inverse_degree_weight(g: &Digraph, c: &Cycle) -> f64 {
    c.vertices().iter().map(|&v| 1.0 / g.out_degree(v) as f64).sum()
}

/// Decomposes the balanced graph `g` into edge-disjoint cycles.
///
/// Self-loops are removed first, each as its own `self_loop` cycle. With the
/// potential strategy the heavy branch runs the potential walk with `λ = 1`
/// under inverse out-degree weights, and a failed theorem-mode bound is an
/// error. A residual graph of maximum degree below 20 takes any cycle through
/// a maximum-degree vertex instead.
pub fn decompose(g: &Digraph, params: &DecompositionParams) -> Result<CycleDecomposition> {
    params.validate()?;
    if !g.is_balanced() {
        return Err(Error::Precondition("graph is not balanced".into()));
    }
    let started = Instant::now();
    let mut res = g.clone();
    let mut out = CycleDecomposition {
        cycles: Vec::new(),
        peels: Vec::new(),
        heavy_shortfalls: 0,
        elapsed: Duration::ZERO,
    };

    let loops: Vec<EdgeId> = res.edges().filter(|(_, a)| a.tail == a.head).map(|(e, _)| e).collect();
    for e in loops {
        let v = res.tail(e);
        let cycle = Cycle::from_parts(vec![v], vec![e]);
        let inv_weight = 1.0 / res.out_degree(v) as f64;
        let d = res.out_degree(v);
        out.peels.push(PeelRecord { delta: d, delta_vertex: v, max_degree: d, mu: 0.0 });
        res.remove_edge(e)?;
        out.cycles.push(TaggedCycle { cycle, tag: CaseTag::SelfLoop, inv_weight });
    }

    let mut buckets = DegreeBuckets::new(&res);
    let mut round = 0u64;
    while let (Some((delta, v_min)), Some((max_degree, v_max))) = (buckets.min(), buckets.max()) {
        let mu = params.mu_for(max_degree);
        let (cycle, tag) = if (delta as f64) < mu {
            (cycle_through(&res, v_min)?, CaseTag::MinDegree)
        } else if max_degree < 20 {
            (cycle_through(&res, v_max)?, CaseTag::Heavy)
        } else {
            (heavy_cycle(&res, v_max, params, round)?, CaseTag::Heavy)
        };
        let inv_weight = inverse_degree_weight(&res, &cycle);
        if tag == CaseTag::Heavy && inv_weight < params.xi - WEIGHT_EPS {
            out.heavy_shortfalls += 1;
        }
        res.remove_cycle(&cycle)?;
        for &v in cycle.vertices() {
            if res.in_degree(v) != res.out_degree(v) {
                return Err(Error::Internal(format!("vertex {v} unbalanced after a peel")));
            }
            buckets.refresh(v, res.out_degree(v));
        }
        out.peels.push(PeelRecord { delta, delta_vertex: v_min, max_degree, mu });
        out.cycles.push(TaggedCycle { cycle, tag, inv_weight });
        round += 1;
    }
    out.elapsed = started.elapsed();
    Ok(out)
}

fn heavy_cycle(res: &Digraph, v_max: VertexId, params: &DecompositionParams, round: u64) -> Result<Cycle> {
    match params.strategy {
        Strategy::Potential => {
            let view = NeighbourView::inverse_out_degree(res);
            let p = PotentialParams::for_view(&view, 1.0)?;
            let (state, ledger) = potential_path_in(&view, Some(v_max), p)?;
            let c = close_heavy_cycle(&view, &state, &ledger)?;
            if p.theorem_mode() && inverse_degree_weight(res, &c) < params.xi - WEIGHT_EPS {
                return Err(Error::Guarantee(format!(
                    "heavy cycle has inverse-degree weight {} below {}",
                    inverse_degree_weight(res, &c),
                    params.xi
                )));
            }
            Ok(c)
        }
        Strategy::Random => {
            let view = NeighbourView::new(res);
            let mut rng = rng_for(params.seed, round);
            let state = random_path_in(&view, Some(v_max), &mut rng, params.seed)?;
            close_cycle_in(&view, &state)
        }
        Strategy::GreedyAny => cycle_through(res, v_max),
    }
}

/// First problem found by [`verify_cycles`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

/// Checks that `cycles` partition the live arcs of `g` into simple,
/// consistently directed cycles. Each cycle's vertex list must be the tails
/// of its arcs in order.
pub fn verify_cycles(cycles: &[Cycle], g: &Digraph) -> std::result::Result<(), Violation> {
    let mut used = vec![false; g.edge_capacity()];
    let mut on_cycle = vec![false; g.vertex_count()];
    for (i, c) in cycles.iter().enumerate() {
        let edges = c.edges();
        if edges.is_empty() {
            return Err(Violation(format!("empty cycle {i}")));
        }
        for &e in edges {
            if e.0 >= used.len() || !g.is_live(e) {
                return Err(Violation(format!("unknown edge {e} in cycle {i}")));
            }
            if used[e.0] {
                return Err(Violation(format!("repeated edge {e} in cycle {i}")));
            }
            used[e.0] = true;
        }
        for (k, &e) in edges.iter().enumerate() {
            let next = edges[(k + 1) % edges.len()];
            if g.head(e) != g.tail(next) {
                return Err(Violation(format!("broken chain at edge {e} in cycle {i}")));
            }
        }
        let tails: Vec<VertexId> = edges.iter().map(|&e| g.tail(e)).collect();
        if c.vertices() != tails.as_slice() {
            return Err(Violation(format!("vertex list of cycle {i} does not match its edges")));
        }
        for &v in &tails {
            if on_cycle[v.0] {
                return Err(Violation(format!("repeated vertex {v} in cycle {i}")));
            }
            on_cycle[v.0] = true;
        }
        for &v in &tails {
            on_cycle[v.0] = false;
        }
    }
    if let Some((e, _)) = g.edges().find(|(e, _)| !used[e.0]) {
        return Err(Violation(format!("missing edge {e}")));
    }
    Ok(())
}

pub fn verify_decomposition(d: &CycleDecomposition, g: &Digraph) -> std::result::Result<(), Violation> {
    verify_cycles(&d.plain_cycles(), g)
}

/// `H(k) = 1 + 1/2 + .. + 1/k`.
pub fn harmonic(k: usize) -> f64 {
    (1..=k).rev().map(|i| 1.0 / i as f64).sum()
}

pub const STATS_HEADER: &str = "n,m,delta,Delta,cycles,case1,case2,longest,budget_ok,seconds";

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionStats {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub max_degree: usize,
    pub cycles: usize,
    /// Cycles through a minimum-degree vertex.
    pub case1: usize,
    /// Heavy cycles.
    pub case2: usize,
    pub self_loops: usize,
    pub longest: usize,
    /// `Σ_v H(d_out(v))` over the original graph.
    pub harmonic_sum: f64,
    /// Sum of the recorded inverse-degree weights of all cycles.
    pub inv_weight_sum: f64,
    /// `μ` used for the budget, the largest any round could have used.
    pub mu: f64,
    /// `n μ + Σ_v H(d_out(v)) / ξ`.
    pub budget: f64,
    pub budget_ok: bool,
    /// `case1 ≤ n μ`.
    pub case1_ok: bool,
    /// `ξ · case2 ≤ Σ_v H(d_out(v))`.
    pub double_count_ok: bool,
    /// `cycles / (n ln Δ)`, with `ln Δ` floored at 1.
    pub count_ratio: f64,
    /// `longest / (m / (n ln Δ))`, with `ln Δ` floored at 1.
    pub length_ratio: f64,
    pub seconds: f64,
}

impl DecompositionStats {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.6}",
            self.n,
            self.m,
            self.delta,
            self.max_degree,
            self.cycles,
            self.case1,
            self.case2,
            self.longest,
            self.budget_ok,
            self.seconds
        )
    }
}

pub fn decomposition_stats(
    d: &CycleDecomposition,
    g: &Digraph,
    params: &DecompositionParams,
) -> Result<DecompositionStats> {
    verify_decomposition(d, g).map_err(|v| Error::InvalidCycle(v.0))?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let degrees = g.degrees();
    let harmonic_sum: f64 = g.vertices().map(|v| harmonic(g.out_degree(v))).sum();
    let inv_weight_sum: f64 = d.cycles.iter().map(|t| t.inv_weight).sum();
    let mu = params.mu_for(degrees.max_degree);
    let budget = n as f64 * mu + harmonic_sum / params.xi;
    let case1 = d.count(CaseTag::MinDegree);
    let case2 = d.count(CaseTag::Heavy);
    let log_delta = (degrees.max_degree.max(1) as f64).ln().max(1.0);
    let longest = d.cycles.iter().map(|t| t.cycle.len()).max().unwrap_or(0);
    let scale = n.max(1) as f64 * log_delta;
    Ok(DecompositionStats {
        n,
        m,
        delta: degrees.min_degree,
        max_degree: degrees.max_degree,
        cycles: d.len(),
        case1,
        case2,
        self_loops: d.count(CaseTag::SelfLoop),
        longest,
        harmonic_sum,
        inv_weight_sum,
        mu,
        budget,
        budget_ok: d.len() as f64 <= budget,
        case1_ok: case1 as f64 <= n as f64 * mu,
        double_count_ok: params.xi * case2 as f64 <= harmonic_sum + WEIGHT_EPS,
        count_ratio: d.len() as f64 / scale,
        length_ratio: if m == 0 { 0.0 } else { longest as f64 / (m as f64 / scale) },
        seconds: d.elapsed.as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn run(g: &Digraph, params: DecompositionParams) -> CycleDecomposition {
        let d = decompose(g, &params).unwrap();
        verify_decomposition(&d, g).unwrap();
        d
    }

    #[test]
    fn triangle() {
        let g = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let d = run(&g, DecompositionParams::default());
        assert_eq!(d.len(), 1);
        // Δ = 1 gives μ = 0, so the heavy branch takes it
        assert_eq!(d.cycles[0].tag, CaseTag::Heavy);
        let stats = decomposition_stats(&d, &g, &DecompositionParams::default()).unwrap();
        assert!(stats.budget_ok);
        assert_eq!(stats.csv_row().split(',').count(), STATS_HEADER.split(',').count());
    }

    #[test]
    fn k4_between_four_and_six() {
        let g = generators::gen_k_symmetric(3).unwrap();
        for strategy in [Strategy::Potential, Strategy::Random, Strategy::GreedyAny] {
            for mu in [None, Some(0.0)] {
                let params = DecompositionParams { strategy, mu, ..Default::default() };
                let d = run(&g, params);
                assert!((4..=6).contains(&d.len()), "{}", d.len());
                let stats = decomposition_stats(&d, &g, &params).unwrap();
                assert!((stats.harmonic_sum - 22.0 / 3.0).abs() < 1e-12);
                assert!((stats.inv_weight_sum - stats.harmonic_sum).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn min_degree_cycles_hold_their_vertex() {
        let g = generators::gen_perm_superposition(60, 5, 2).unwrap();
        let d = run(&g, DecompositionParams::default());
        assert!(d.count(CaseTag::MinDegree) > 0);
        for (t, p) in d.cycles.iter().zip(&d.peels) {
            if t.tag == CaseTag::MinDegree {
                assert!(t.cycle.contains(p.delta_vertex));
                assert!((p.delta as f64) < p.mu);
            }
        }
    }

    #[test]
    fn heavy_branch_on_large_degree() {
        let g = generators::gen_perm_superposition(100, 24, 9).unwrap();
        for strategy in [Strategy::Potential, Strategy::Random, Strategy::GreedyAny] {
            let params = DecompositionParams { strategy, mu: Some(5.0), seed: 4, ..Default::default() };
            let d = run(&g, params);
            assert!(d.count(CaseTag::Heavy) > 0);
            assert_eq!(d.heavy_shortfalls, 0);
            let stats = decomposition_stats(&d, &g, &params).unwrap();
            assert!(stats.double_count_ok && stats.case1_ok);
            assert!((stats.inv_weight_sum - stats.harmonic_sum).abs() < 1e-6);
        }
    }

    #[test]
    fn random_strategy_is_seeded() {
        let g = generators::gen_perm_superposition(80, 22, 1).unwrap();
        let params = DecompositionParams { strategy: Strategy::Random, mu: Some(1.0), seed: 7, ..Default::default() };
        let a = run(&g, params);
        let b = run(&g, params);
        let ea: Vec<_> = a.cycles.iter().map(|t| t.cycle.edges().to_vec()).collect();
        let eb: Vec<_> = b.cycles.iter().map(|t| t.cycle.edges().to_vec()).collect();
        assert_eq!(ea, eb);
    }

    #[test]
    fn self_loops_come_first() {
        let g = Digraph::from_arcs(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let d = run(&g, DecompositionParams::default());
        assert_eq!(d.count(CaseTag::SelfLoop), 2);
        assert_eq!(d.cycles[0].inv_weight, 0.5);
        let stats = decomposition_stats(&d, &g, &DecompositionParams::default()).unwrap();
        assert!((stats.inv_weight_sum - stats.harmonic_sum).abs() < 1e-12);
    }

    #[test]
    fn unbalanced_is_rejected() {
        let g = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(decompose(&g, &DecompositionParams::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn verifier_diagnostics() {
        let g = generators::gen_k_symmetric(3).unwrap();
        let d = run(&g, DecompositionParams::default());
        let mut cycles = d.plain_cycles();

        let mut dup = cycles.clone();
        dup.push(cycles[0].clone());
        assert!(verify_cycles(&dup, &g).unwrap_err().0.starts_with("repeated edge"));

        let longest = (0..cycles.len()).max_by_key(|&i| cycles[i].len()).unwrap();
        let c = &cycles[longest];
        let shorter = Cycle::from_parts(c.vertices()[1..].to_vec(), c.edges()[1..].to_vec());
        let mut dropped = cycles.clone();
        dropped[longest] = shorter;
        assert!(verify_cycles(&dropped, &g).is_err());

        cycles.pop();
        assert!(verify_cycles(&cycles, &g).unwrap_err().0.starts_with("missing edge"));
    }

    #[test]
    fn verifier_rejects_repeated_vertex() {
        // figure eight: 0 -> 1 -> 0 -> 2 -> 0 as one "cycle"
        let g = Digraph::from_arcs(3, [(0, 1), (1, 0), (0, 2), (2, 0)]).unwrap();
        let c = Cycle::from_parts(vec![VertexId(0), VertexId(1), VertexId(0), VertexId(2)], (0..4).map(EdgeId).collect());
        assert!(verify_cycles(&[c], &g).unwrap_err().0.starts_with("repeated vertex"));
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(0), 0.0);
        assert!((harmonic(3) - 11.0 / 6.0).abs() < 1e-15);
    }
}
