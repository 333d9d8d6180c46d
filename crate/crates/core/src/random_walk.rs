//! Randomized self-avoiding walk and the cycle it closes.
//!
//! From the current tip the walk moves to a uniformly random unvisited
//! out-neighbour for as long as at least half of the tip's out-neighbours are
//! unvisited. When it stops, the tip is joined to its earliest out-neighbour
//! on the path.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`; independent trials use separate ChaCha streams of the
//! same seed, so every run is bit-reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Cycle, Digraph, VertexId};
use crate::view::NeighbourView;

/// The generator used everywhere in the crate.
pub type WalkRng = ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> WalkRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const OFF_PATH: usize = usize::MAX;

/// A growing simple path together with the bookkeeping the walks need.
#[derive(Debug, Clone)]
pub struct WalkState {
    path: Vec<VertexId>,
    position: Vec<usize>,
    /// `rd_t(x_t)` for every `t` on the path.
    rd: Vec<usize>,
    /// `rw_t(x_t)` for every `t` on the path.
    rw: Vec<f64>,
    pub seed: u64,
}

impl WalkState {
    pub(crate) fn start(view: &NeighbourView, x0: VertexId, seed: u64) -> Self {
        let mut state = WalkState {
            path: Vec::new(),
            position: vec![OFF_PATH; view.vertex_count()],
            rd: Vec::new(),
            rw: Vec::new(),
            seed,
        };
        state.push(view, x0);
        state
    }

    pub(crate) fn push(&mut self, view: &NeighbourView, v: VertexId) {
        debug_assert!(!self.visited(v));
        self.position[v.0] = self.path.len();
        self.path.push(v);
        let (mut rd, mut rw) = (0, 0.0);
        for nb in view.out(v) {
            if !self.visited(nb.vertex) {
                rd += 1;
                rw += nb.weight;
            }
        }
        self.rd.push(rd);
        self.rw.push(rw);
    }

    #[inline]
    pub fn path(&self) -> &[VertexId] {
        &self.path
    }

    /// Index of the last vertex, `T`.
    #[inline]
    pub fn last_index(&self) -> usize {
        self.path.len() - 1
    }

    #[inline]
    pub fn tip(&self) -> VertexId {
        *self.path.last().expect("walk has a start vertex")
    }

    #[inline]
    pub fn visited(&self, v: VertexId) -> bool {
        self.position[v.0] != OFF_PATH
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        Some(self.position[v.0]).filter(|&p| p != OFF_PATH)
    }

    /// Remaining out-degree of the tip.
    #[inline]
    pub fn rd(&self) -> usize {
        *self.rd.last().expect("walk has a start vertex")
    }

    /// Remaining out-weight of the tip.
    #[inline]
    pub fn rw(&self) -> f64 {
        *self.rw.last().expect("walk has a start vertex")
    }

    /// `rd_t(x_t)` for each path index.
    pub fn rd_history(&self) -> &[usize] {
        &self.rd
    }

    pub fn rw_history(&self) -> &[f64] {
        &self.rw
    }

    /// Earliest path index holding an out-neighbour of `v`.
    pub fn first_out_neighbour_index(&self, view: &NeighbourView, v: VertexId) -> Option<usize> {
        view.out(v).iter().filter_map(|nb| self.position(nb.vertex)).min()
    }

    /// Recomputes the tip's remaining out-degree from scratch.
    pub fn recount_rd(&self, view: &NeighbourView) -> usize {
        view.out(self.tip()).iter().filter(|nb| !self.visited(nb.vertex)).count()
    }

    /// The cycle `x_s .. x_T` closed by the arc `x_T -> x_s`.
    pub(crate) fn cycle_from(&self, view: &NeighbourView, s: usize) -> Result<Cycle> {
        let t_last = self.last_index();
        let closing = view
            .neighbour(self.tip(), self.path[s])
            .ok_or_else(|| Error::Internal(format!("no arc {} -> {}", self.tip(), self.path[s])))?;
        let mut edges = Vec::with_capacity(t_last - s + 1);
        for t in s..t_last {
            let nb = view
                .neighbour(self.path[t], self.path[t + 1])
                .ok_or_else(|| Error::Internal("path step without an arc".into()))?;
            edges.push(nb.edge);
        }
        edges.push(closing.edge);
        Ok(Cycle::from_parts(self.path[s..].to_vec(), edges))
    }
}

fn default_start(view: &NeighbourView, start: Option<VertexId>) -> Result<VertexId> {
    match start {
        Some(v) if v.0 >= view.vertex_count() => Err(Error::VertexOutOfRange(v)),
        Some(v) if view.out_degree(v) == 0 => {
            Err(Error::Precondition(format!("start vertex {v} has no out-arc")))
        }
        Some(v) => Ok(v),
        None => view
            .max_out_degree_vertex()
            .ok_or_else(|| Error::Precondition("graph has no arcs".into())),
    }
}

/// Runs the random walk on a prepared view.
pub fn random_path_in(
    view: &NeighbourView,
    start: Option<VertexId>,
    rng: &mut impl Rng,
    seed: u64,
) -> Result<WalkState> {
    let x0 = default_start(view, start)?;
    let mut state = WalkState::start(view, x0, seed);
    let mut candidates: Vec<VertexId> = Vec::new();
    loop {
        let tip = state.tip();
        let d = view.out_degree(tip);
        if d == 0 {
            return Err(Error::Precondition(format!("vertex {tip} is a sink")));
        }
        // stop once rd < d / 2
        if 2 * state.rd() < d {
            break;
        }
        candidates.clear();
        candidates.extend(view.out(tip).iter().map(|nb| nb.vertex).filter(|&u| !state.visited(u)));
        debug_assert_eq!(candidates.len(), state.rd());
        let next = candidates[rng.gen_range(0..candidates.len())];
        state.push(view, next);
    }
    Ok(state)
}

/// Seeded random walk on `g`; starts at the vertex of largest out-degree
/// unless `start` is given.
pub fn random_path(g: &Digraph, start: Option<VertexId>, seed: u64) -> Result<WalkState> {
    let view = NeighbourView::new(g);
    random_path_in(&view, start, &mut rng_for(seed, 0), seed)
}

/// Closes the walk at the first path vertex that is an out-neighbour of the tip.
pub fn close_cycle_in(view: &NeighbourView, state: &WalkState) -> Result<Cycle> {
    if state.last_index() == 0 {
        return Err(Error::Precondition("walk has no step".into()));
    }
    let s = state
        .first_out_neighbour_index(view, state.tip())
        .ok_or_else(|| Error::Internal("tip has no visited out-neighbour".into()))?;
    state.cycle_from(view, s)
}

pub fn close_cycle(g: &Digraph, state: &WalkState) -> Result<Cycle> {
    close_cycle_in(&NeighbourView::new(g), state)
}

/// `sum over v in c of 1 / d_out(v)` with the current degrees of `g`.
pub fn cycle_inverse_degree_weight(g: &Digraph, c: &Cycle) -> f64 {
    c.vertices().iter().map(|&v| 1.0 / g.out_degree(v) as f64).sum()
}

/// `log log n / (8 log n)`.
pub fn whp_threshold(n: usize) -> f64 {
    let ln = (n as f64).ln();
    ln.ln() / (8.0 * ln)
}

/// Default `K₀` for the constant-weight regime `δ ≥ K₀ ln n`.
pub const DEFAULT_K0: f64 = 16.0;

/// `K₁ = 1/8 - 1/K₀`, the inverse-degree weight a closed walk cycle reaches
/// on graphs with `δ ≥ K₀ ln n` (with probability at least `1 - 1/n`).
pub fn constant_weight_floor(k0: f64) -> Result<f64> {
    if !(k0.is_finite() && k0 > 8.0) {
        return Err(Error::InvalidParameter(format!("K0 = {k0} must exceed 8")));
    }
    Ok(0.125 - 1.0 / k0)
}

/// True when the minimum degree of `g` reaches `K₀ ln n`.
pub fn in_constant_weight_regime(g: &Digraph, k0: f64) -> bool {
    let n = g.vertex_count();
    n >= 2 && g.degrees().min_degree as f64 >= k0 * (n as f64).ln()
}

#[derive(Debug, Clone)]
pub struct WhpEstimate {
    pub trials: usize,
    pub threshold: f64,
    /// Inverse-degree weight of each trial's cycle, in trial order.
    pub weights: Vec<f64>,
    pub fraction_meeting: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Runs `trials` independent walks and measures how often the closed cycle
/// reaches the `log log n / (8 log n)` inverse-degree weight.
pub fn estimate_whp_weight(g: &Digraph, trials: usize, seed: u64) -> Result<WhpEstimate> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(Error::Precondition("need at least 3 vertices".into()));
    }
    if let Some(v) = g.vertices().find(|&v| g.out_degree(v) == 0) {
        return Err(Error::Precondition(format!("vertex {v} is a sink")));
    }
    let mut loopless = g.clone();
    loopless.strip_self_loops();
    let view = NeighbourView::new(&loopless);
    let threshold = whp_threshold(n);
    let weights: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng_for(seed, trial as u64);
            let state = random_path_in(&view, None, &mut rng, seed)?;
            let c = close_cycle_in(&view, &state)?;
            Ok(cycle_inverse_degree_weight(g, &c))
        })
        .collect::<Result<_>>()?;
    let meeting = weights.iter().filter(|&&w| w >= threshold).count();
    let denom = trials.max(1) as f64;
    Ok(WhpEstimate {
        trials,
        threshold,
        fraction_meeting: meeting as f64 / denom,
        mean: weights.iter().sum::<f64>() / denom,
        min: weights.iter().copied().fold(f64::INFINITY, f64::min),
        max: weights.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        weights,
    })
}

/// Checks the visited-neighbour concentration event for one finished walk:
/// for every vertex `v` and every `s < T`,
/// `|N+(v) ∩ {x_s..x_T}| <= 1 + (2e^λ - 2)/λ · d+(v) · Σ_{t=s}^{T-1} 1/d+(x_t) + (3/λ) ln n`.
///
/// Returns the first `(v, s)` breaking it, scanning `v` then `s` upward.
pub fn visited_neighbour_violation(
    view: &NeighbourView,
    state: &WalkState,
    lambda: f64,
) -> Option<(VertexId, usize)> {
    let path = state.path();
    let t_last = state.last_index();
    let n = view.vertex_count() as f64;
    let slope = (2.0 * lambda.exp() - 2.0) / lambda;
    let additive = 3.0 / lambda * n.ln();
    // inv_suffix[s] = Σ_{t=s}^{T-1} 1/d+(x_t)
    let mut inv_suffix = vec![0.0; t_last + 1];
    for t in (0..t_last).rev() {
        inv_suffix[t] = inv_suffix[t + 1] + 1.0 / view.out_degree(path[t]) as f64;
    }
    let mut hits = vec![0usize; t_last + 1];
    for v in (0..view.vertex_count()).map(VertexId) {
        let d = view.out_degree(v);
        if d == 0 {
            continue;
        }
        hits.iter_mut().for_each(|h| *h = 0);
        for nb in view.out(v) {
            if let Some(p) = state.position(nb.vertex) {
                hits[p] += 1;
            }
        }
        let mut count = hits[t_last];
        for s in (0..t_last).rev() {
            count += hits[s];
            let bound = 1.0 + slope * d as f64 * inv_suffix[s] + additive;
            if count as f64 > bound + 1e-9 {
                return Some((v, s));
            }
        }
    }
    None
}
