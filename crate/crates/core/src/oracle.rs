//! Exhaustive ground truth for small instances.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Cycle, Digraph, EdgeId, VertexId, WEIGHT_EPS};
use crate::random_walk::rng_for;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest arc count accepted by [`min_decomposition_exact`].
    pub max_edges: usize,
    /// Largest number of cycles [`enumerate_cycles`] may produce.
    pub max_cycles: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_edges: 16, max_cycles: 1_000_000 }
    }
}

struct Johnson<'a> {
    g: &'a Digraph,
    start: usize,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    found: Vec<Cycle>,
    cap: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, v: usize) {
        let mut work = vec![v];
        while let Some(x) = work.pop() {
            if self.blocked[x] {
                self.blocked[x] = false;
                work.append(&mut self.blocked_by[x]);
            }
        }
    }

    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut closed = false;
        self.vertices.push(VertexId(v));
        self.blocked[v] = true;
        let g = self.g;
        for &e in g.out_edges(VertexId(v)) {
            let w = g.head(e).0;
            if w < self.start {
                continue;
            }
            if w == self.start {
                if self.found.len() >= self.cap {
                    return Err(Error::BudgetExceeded(format!("more than {} cycles", self.cap)));
                }
                let mut edges = self.edges.clone();
                edges.push(e);
                self.found.push(Cycle::from_parts(self.vertices.clone(), edges));
                closed = true;
            } else if !self.blocked[w] {
                self.edges.push(e);
                let sub = self.circuit(w);
                self.edges.pop();
                if sub? {
                    closed = true;
                }
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &e in g.out_edges(VertexId(v)) {
                let w = g.head(e).0;
                if w >= self.start && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.vertices.pop();
        Ok(closed)
    }
}

/// All elementary cycles of `g` over live arcs, self-loops included.
///
/// Each cycle starts at its smallest vertex. Parallel arcs give distinct
/// cycles. Exceeding `budget.max_cycles` is an error rather than a partial
/// result.
pub fn enumerate_cycles(g: &Digraph, budget: OracleBudget) -> Result<Vec<Cycle>> {
    let n = g.vertex_count();
    let mut j = Johnson {
        g,
        start: 0,
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        vertices: Vec::new(),
        edges: Vec::new(),
        found: Vec::new(),
        cap: budget.max_cycles,
    };
    for s in 0..n {
        j.start = s;
        for v in s..n {
            j.blocked[v] = false;
            j.blocked_by[v].clear();
        }
        j.circuit(s)?;
    }
    Ok(j.found)
}

/// Maximum-weight elementary cycle; ties within `1e-9` go to the
/// lexicographically smallest vertex sequence, then edge sequence.
pub fn heaviest_cycle_exact(g: &Digraph, budget: OracleBudget) -> Result<(Cycle, f64)> {
    let mut best: Option<(Cycle, f64)> = None;
    for c in enumerate_cycles(g, budget)? {
        let w = c.weight(g);
        let better = match &best {
            None => true,
            Some((b, bw)) => {
                w > bw + WEIGHT_EPS
                    || ((w - bw).abs() <= WEIGHT_EPS
                        && (c.vertices(), c.edges()) < (b.vertices(), b.edges()))
            }
        };
        if better {
            best = Some((c, w));
        }
    }
    best.ok_or(Error::NoCycle)
}

/// Fewest cycles in any decomposition of the balanced graph `g`.
///
/// Depth-first search over cycle removals, always branching on the cycles
/// through the lowest remaining arc, memoized on the remaining arc set.
/// A branch stops early once it matches the bound `⌈remaining / active⌉`
/// (no cycle has more arcs than the graph has vertices with arcs).
pub fn min_decomposition_exact(g: &Digraph, budget: OracleBudget) -> Result<usize> {
    let m = g.edge_count();
    if m > budget.max_edges.min(64) {
        return Err(Error::BudgetExceeded(format!("{m} arcs exceed the limit of {}", budget.max_edges)));
    }
    if !g.is_balanced() {
        return Err(Error::Precondition("graph is not balanced".into()));
    }
    let index: HashMap<EdgeId, usize> = g.edges().enumerate().map(|(i, (e, _))| (e, i)).collect();
    let tails: Vec<usize> = g.edges().map(|(_, a)| a.tail.0).collect();
    let cycles = enumerate_cycles(g, budget)?;
    let masks: Vec<u64> =
        cycles.iter().map(|c| c.edges().iter().fold(0u64, |acc, e| acc | 1 << index[e])).collect();
    let mut through: Vec<Vec<u64>> = vec![Vec::new(); m];
    for &mask in &masks {
        through[mask.trailing_zeros() as usize].push(mask);
    }
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut memo = HashMap::new();
    Ok(solve(full, &through, &tails, &mut memo))
}

fn solve(rem: u64, through: &[Vec<u64>], tails: &[usize], memo: &mut HashMap<u64, usize>) -> usize {
    if rem == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&rem) {
        return v;
    }
    let mut active: Vec<usize> = (0..tails.len()).filter(|&i| rem >> i & 1 == 1).map(|i| tails[i]).collect();
    active.sort_unstable();
    active.dedup();
    let lower = (rem.count_ones() as usize).div_ceil(active.len());
    let low = rem.trailing_zeros() as usize;
    let mut best = usize::MAX;
    // every cycle through the lowest remaining arc has its lowest bit there
    for &c in &through[low] {
        if c & rem != c {
            continue;
        }
        let sub = solve(rem & !c, through, tails, memo);
        if sub != usize::MAX {
            best = best.min(1 + sub);
        }
        if best == lower {
            break;
        }
    }
    memo.insert(rem, best);
    best
}

/// A sequence `X_1, X_2, ..` of 0/1 variables with `E[X_t | past] = p_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailProcess {
    Constant(f64),
    /// `p_t = after_hit` when `X_{t-1} = 1`, otherwise `base` (also `p_1`).
    Adaptive { base: f64, after_hit: f64 },
    Zero,
}

impl TailProcess {
    fn validate(&self) -> Result<()> {
        let ps: &[f64] = match self {
            TailProcess::Constant(p) => &[*p],
            TailProcess::Adaptive { base, after_hit } => &[*base, *after_hit],
            TailProcess::Zero => &[],
        };
        for &p in ps {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(())
    }

    fn next_p(&self, last: Option<bool>) -> f64 {
        match *self {
            TailProcess::Constant(p) => p,
            TailProcess::Adaptive { base, after_hit } => {
                if last == Some(true) {
                    after_hit
                } else {
                    base
                }
            }
            TailProcess::Zero => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCheck {
    pub trials: usize,
    pub violations: usize,
    pub rate: f64,
    /// `e^{-c}`.
    pub bound: f64,
}

impl TailCheck {
    /// `rate ≤ e^{-c} + 3 sqrt(e^{-c} / trials)`.
    pub fn within_slack(&self) -> bool {
        self.rate <= self.bound + 3.0 * (self.bound / self.trials.max(1) as f64).sqrt()
    }
}

/// Simulates `trials` runs of length `n` and counts how often
/// `λ Σ X_t > (e^λ - 1) Σ p_t + c`.
pub fn mc_tail_check(
    process: TailProcess,
    n: usize,
    lambda: f64,
    c: f64,
    trials: usize,
    seed: u64,
) -> Result<TailCheck> {
    process.validate()?;
    if !(lambda.is_finite() && lambda > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda {lambda}, c {c}")));
    }
    let slope = lambda.exp_m1();
    let violations = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let mut rng = rng_for(seed, trial as u64);
            let (mut hits, mut mass) = (0u64, 0.0);
            let mut last = None;
            for _ in 0..n {
                let p = process.next_p(last);
                let x = rng.gen::<f64>() < p;
                hits += u64::from(x);
                mass += p;
                last = Some(x);
            }
            lambda * hits as f64 > slope * mass + c
        })
        .count();
    Ok(TailCheck {
        trials,
        violations,
        rate: violations as f64 / trials.max(1) as f64,
        bound: (-c).exp(),
    })
}
