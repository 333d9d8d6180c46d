//! Deterministic heavy-cycle walk driven by two potentials.
//!
//! A vertex `v` is activated once one of its out-neighbours is on the path;
//! `act(v)` is the index of the first such path vertex. For a path
//! `x_0 .. x_t`
//!
//! ```text
//! a(v) = exp( (1/w_max) Σ_{r=act(v)}^{t-1} (λ w(v, x_{r+1}) - e^λ / rd_r(x_r)) )
//! A    = (1/Δ²) Σ_{v activated} a(v)
//! B    = Σ_{s=0}^{t-1} (1/rd_s(x_s)) exp( -(50 e^λ / λ) Σ_{r=s}^{t-1} w(x_r, x_{r+1}) )
//! ```
//!
//! Each step extends the path by the unvisited out-neighbour minimizing the
//! next `A + B` (smallest id on ties) for as long as the tip keeps remaining
//! out-weight at least 1/2. The walk then closes at `x_{act(x_T)}`.
//!
//! `a(v)` lives in log space relative to one shared offset, since the decay
//! factor is the same for every activated vertex and underflows quickly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{sink_scc, Cycle, Digraph, VertexId, WEIGHT_EPS};
use crate::random_walk::WalkState;
use crate::view::NeighbourView;
use crate::weighting;

const RECOMPUTE_EVERY: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub lambda: f64,
    pub w_max: f64,
    /// `Δ`, largest in- or out-degree.
    pub max_degree: usize,
}

impl PotentialParams {
    /// Parameters read off a view: its largest combined weight and degree.
    pub fn for_view(view: &NeighbourView, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda {lambda}")));
        }
        if view.max_weight() <= 0.0 {
            return Err(Error::Precondition("graph has no arc of positive weight".into()));
        }
        Ok(PotentialParams { lambda, w_max: view.max_weight(), max_degree: view.max_degree() })
    }

    pub fn for_graph(g: &Digraph, lambda: f64) -> Result<Self> {
        Self::for_view(&NeighbourView::new(g), lambda)
    }

    /// `Δ ≥ 20`, `1 ≤ λ ≤ ln ln Δ` and `w_max ≤ λ / (50 ln Δ)`.
    pub fn theorem_mode(&self) -> bool {
        if self.max_degree < 20 {
            return false;
        }
        let ln_delta = (self.max_degree as f64).ln();
        self.lambda >= 1.0
            && self.lambda <= ln_delta.ln() + WEIGHT_EPS
            && self.w_max <= self.lambda / (50.0 * ln_delta) + WEIGHT_EPS
    }

    /// `7λ / (50 e^λ)`.
    pub fn ab_bound(&self) -> f64 {
        7.0 * self.lambda / (50.0 * self.lambda.exp())
    }

    /// `2λ / (5 e^λ)`.
    pub fn window_bound(&self) -> f64 {
        2.0 * self.lambda / (5.0 * self.lambda.exp())
    }

    /// `λ / (50 e^λ)`.
    pub fn weight_bound(&self) -> f64 {
        self.lambda / (50.0 * self.lambda.exp())
    }

    fn decay_rate(&self) -> f64 {
        self.lambda.exp() / self.w_max
    }

    fn boost_rate(&self) -> f64 {
        self.lambda / self.w_max
    }

    fn b_rate(&self) -> f64 {
        50.0 * self.lambda.exp() / self.lambda
    }

    fn inv_delta_sq(&self) -> f64 {
        let d = self.max_degree.max(1) as f64;
        1.0 / (d * d)
    }
}

/// State of the walk at one index, as written to the step trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub t: usize,
    pub chosen: VertexId,
    pub rd: usize,
    pub rw: f64,
    pub a: f64,
    pub b: f64,
}

const NOT_ACTIVE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct PotentialLedger {
    params: PotentialParams,
    /// `ln a(v) - offset` for activated vertices.
    log_a: Vec<f64>,
    act: Vec<usize>,
    offset: f64,
    activated: Vec<VertexId>,
    a_total: f64,
    b_total: f64,
    since_recompute: usize,
    trace: Vec<StepRecord>,
}

impl PotentialLedger {
    fn new(view: &NeighbourView, params: PotentialParams) -> Self {
        let n = view.vertex_count();
        PotentialLedger {
            params,
            log_a: vec![0.0; n],
            act: vec![NOT_ACTIVE; n],
            offset: 0.0,
            activated: Vec::new(),
            a_total: 0.0,
            b_total: 0.0,
            since_recompute: 0,
            trace: Vec::new(),
        }
    }

    pub fn params(&self) -> &PotentialParams {
        &self.params
    }

    #[inline]
    pub fn a_total(&self) -> f64 {
        self.a_total
    }

    #[inline]
    pub fn b_total(&self) -> f64 {
        self.b_total
    }

    pub fn act(&self, v: VertexId) -> Option<usize> {
        Some(self.act[v.0]).filter(|&s| s != NOT_ACTIVE)
    }

    pub fn is_activated(&self, v: VertexId) -> bool {
        self.act[v.0] != NOT_ACTIVE
    }

    /// `a(v)`, `None` before activation.
    pub fn a(&self, v: VertexId) -> Option<f64> {
        self.is_activated(v).then(|| (self.log_a[v.0] + self.offset).exp())
    }

    pub fn activated(&self) -> &[VertexId] {
        &self.activated
    }

    pub fn trace(&self) -> &[StepRecord] {
        &self.trace
    }

    /// `A` summed afresh from the stored `a(v)`.
    pub fn recompute_a(&self) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for &v in &self.activated {
            let y = (self.log_a[v.0] + self.offset).exp() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum * self.params.inv_delta_sq()
    }

    fn activate(&mut self, v: VertexId, t: usize) {
        self.act[v.0] = t;
        self.log_a[v.0] = -self.offset;
        self.activated.push(v);
    }

    fn record(&mut self, state: &WalkState) {
        self.trace.push(StepRecord {
            t: state.last_index(),
            chosen: state.tip(),
            rd: state.rd(),
            rw: state.rw(),
            a: self.a_total,
            b: self.b_total,
        });
    }

    /// Moves the shared offset back to zero so it cannot grow without bound.
    fn renormalize(&mut self) {
        for &v in &self.activated {
            self.log_a[v.0] += self.offset;
        }
        self.offset = 0.0;
    }

    /// Periodic full recount of `A`, bounding the drift of the running value.
    fn maybe_refresh(&mut self) {
        self.since_recompute += 1;
        if self.since_recompute >= RECOMPUTE_EVERY {
            self.renormalize();
            self.a_total = self.recompute_a();
            self.since_recompute = 0;
        }
    }
}

/// `A'` and `B'` for a hypothetical extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub a: f64,
    pub b: f64,
}

impl Score {
    #[inline]
    pub fn total(&self) -> f64 {
        self.a + self.b
    }
}

fn score(ledger: &PotentialLedger, view: &NeighbourView, state: &WalkState, u: VertexId) -> Score {
    let p = &ledger.params;
    let rd = state.rd() as f64;
    let m = (-p.decay_rate() / rd).exp();
    let mut boost = 0.0;
    let mut fresh = 0usize;
    for &(v, w) in view.inn(u) {
        match ledger.a(v) {
            Some(a) => boost += a * (p.boost_rate() * w).exp_m1(),
            None => fresh += 1,
        }
    }
    let inv = p.inv_delta_sq();
    let a = m * (ledger.a_total + inv * boost) + fresh as f64 * inv;
    let b = (ledger.b_total + 1.0 / rd) * (-p.b_rate() * view.weight(state.tip(), u)).exp();
    Score { a, b }
}

/// `A' + B'` for extending the path by `u`.
pub fn candidate_score(
    ledger: &PotentialLedger,
    view: &NeighbourView,
    state: &WalkState,
    u: VertexId,
) -> Result<f64> {
    candidate_detail(ledger, view, state, u).map(|s| s.total())
}

pub fn candidate_detail(
    ledger: &PotentialLedger,
    view: &NeighbourView,
    state: &WalkState,
    u: VertexId,
) -> Result<Score> {
    if u.0 >= view.vertex_count() {
        return Err(Error::VertexOutOfRange(u));
    }
    if state.visited(u) {
        return Err(Error::InvalidParameter(format!("candidate {u} is already on the path")));
    }
    if view.neighbour(state.tip(), u).is_none() {
        return Err(Error::InvalidParameter(format!("{u} is not an out-neighbour of {}", state.tip())));
    }
    Ok(score(ledger, view, state, u))
}

fn extend(ledger: &mut PotentialLedger, view: &NeighbourView, state: &mut WalkState, u: VertexId) {
    let next = score(ledger, view, state, u);
    let p = ledger.params;
    ledger.offset -= p.decay_rate() / state.rd() as f64;
    let t_next = state.last_index() + 1;
    for &(v, w) in view.inn(u) {
        if ledger.is_activated(v) {
            ledger.log_a[v.0] += p.boost_rate() * w;
        } else {
            ledger.activate(v, t_next);
        }
    }
    ledger.a_total = next.a;
    ledger.b_total = next.b;
    state.push(view, u);
    ledger.maybe_refresh();
    ledger.record(state);
}

fn check_unit_out_weights(view: &NeighbourView) -> Result<()> {
    for v in (0..view.vertex_count()).map(VertexId) {
        if view.has_arcs(v) && (view.out_weight(v) - 1.0).abs() > WEIGHT_EPS {
            return Err(Error::Precondition(format!(
                "vertex {v} has out-weight {}, expected 1",
                view.out_weight(v)
            )));
        }
    }
    Ok(())
}

/// Runs the walk on a prepared view whose out-weights are all 1.
///
/// In theorem mode `A + B ≤ 7λ/(50e^λ)` is checked after every step and a
/// violation is returned as [`Error::Guarantee`].
pub fn potential_path_in(
    view: &NeighbourView,
    start: Option<VertexId>,
    params: PotentialParams,
) -> Result<(WalkState, PotentialLedger)> {
    check_unit_out_weights(view)?;
    let x0 = match start {
        Some(v) if v.0 >= view.vertex_count() => return Err(Error::VertexOutOfRange(v)),
        Some(v) if view.out_degree(v) == 0 => {
            return Err(Error::Precondition(format!("start vertex {v} has no out-arc")))
        }
        Some(v) => v,
        None => view
            .max_out_degree_vertex()
            .ok_or_else(|| Error::Precondition("graph has no arcs".into()))?,
    };
    let theorem = params.theorem_mode();
    let mut ledger = PotentialLedger::new(view, params);
    let mut state = WalkState::start(view, x0, 0);
    for &(v, _) in view.inn(x0) {
        ledger.activate(v, 0);
    }
    ledger.a_total = ledger.recompute_a();
    ledger.record(&state);
    check_step(&ledger, theorem)?;

    while state.rw() >= 0.5 - WEIGHT_EPS {
        if state.rd() == 0 {
            return Err(Error::Internal(format!("tip {} has out-weight left but no neighbour", state.tip())));
        }
        let mut best: Option<(f64, VertexId)> = None;
        for nb in view.out(state.tip()) {
            if state.visited(nb.vertex) {
                continue;
            }
            let s = score(&ledger, view, &state, nb.vertex).total();
            if best.is_none_or(|(b, _)| s < b) {
                best = Some((s, nb.vertex));
            }
        }
        let (_, u) = best.expect("rd > 0 leaves a candidate");
        extend(&mut ledger, view, &mut state, u);
        check_step(&ledger, theorem)?;
    }
    Ok((state, ledger))
}

/// Builds the ledger along a given path instead of the argmin choices.
/// Each vertex after the first must be an unvisited out-neighbour of the
/// previous one. Nothing is asserted about the potentials.
pub fn replay_path(
    view: &NeighbourView,
    params: PotentialParams,
    path: &[VertexId],
) -> Result<(WalkState, PotentialLedger)> {
    let (&x0, rest) = path.split_first().ok_or_else(|| Error::InvalidParameter("empty path".into()))?;
    if x0.0 >= view.vertex_count() {
        return Err(Error::VertexOutOfRange(x0));
    }
    let mut ledger = PotentialLedger::new(view, params);
    let mut state = WalkState::start(view, x0, 0);
    for &(v, _) in view.inn(x0) {
        ledger.activate(v, 0);
    }
    ledger.a_total = ledger.recompute_a();
    ledger.record(&state);
    for &u in rest {
        candidate_detail(&ledger, view, &state, u)?;
        extend(&mut ledger, view, &mut state, u);
    }
    Ok((state, ledger))
}

fn check_step(ledger: &PotentialLedger, theorem: bool) -> Result<()> {
    if theorem && !assert_ab_bound(ledger) {
        let last = ledger.trace.last().expect("trace has the current step");
        return Err(Error::Guarantee(format!(
            "A + B = {} exceeds {} at step {}",
            last.a + last.b,
            ledger.params.ab_bound(),
            last.t
        )));
    }
    Ok(())
}

/// Runs the walk on `g` with its own weights.
pub fn potential_path(
    g: &Digraph,
    start: Option<VertexId>,
    params: PotentialParams,
) -> Result<(WalkState, PotentialLedger)> {
    potential_path_in(&NeighbourView::new(g), start, params)
}

/// `A + B ≤ 7λ/(50e^λ) + 1e-9`; vacuously true outside theorem mode.
pub fn assert_ab_bound(ledger: &PotentialLedger) -> bool {
    !ledger.params.theorem_mode() || ab_within_bound(ledger)
}

/// The same comparison without the theorem-mode gate.
pub fn ab_within_bound(ledger: &PotentialLedger) -> bool {
    ledger.a_total + ledger.b_total <= ledger.params.ab_bound() + WEIGHT_EPS
}

/// `Σ_{t=s}^{T-1} 1 / rd_t(x_t)`.
pub fn window_sum(state: &WalkState, s: usize) -> f64 {
    state.rd_history()[s..state.last_index()].iter().map(|&rd| 1.0 / rd as f64).sum()
}

/// Weight of `c` measured with the view's combined arc weights.
pub fn view_cycle_weight(view: &NeighbourView, c: &Cycle) -> f64 {
    let vs = c.vertices();
    (0..vs.len()).map(|i| view.weight(vs[i], vs[(i + 1) % vs.len()])).sum()
}

/// Closes the walk with the arc `x_T -> x_{act(x_T)}`.
///
/// In theorem mode the closing window and the cycle weight are checked
/// against `2λ/(5e^λ)` and `λ/(50e^λ)`.
pub fn close_heavy_cycle(view: &NeighbourView, state: &WalkState, ledger: &PotentialLedger) -> Result<Cycle> {
    if state.last_index() == 0 {
        return Err(Error::Precondition("walk has no step".into()));
    }
    let s = ledger
        .act(state.tip())
        .ok_or_else(|| Error::Internal(format!("tip {} is not activated", state.tip())))?;
    let c = state.cycle_from(view, s)?;
    let p = ledger.params;
    if p.theorem_mode() {
        let window = window_sum(state, s);
        if window < p.window_bound() - WEIGHT_EPS {
            return Err(Error::Guarantee(format!("closing window {window} below {}", p.window_bound())));
        }
        let w = view_cycle_weight(view, &c);
        if w < p.weight_bound() - WEIGHT_EPS {
            return Err(Error::Guarantee(format!("cycle weight {w} below {}", p.weight_bound())));
        }
    }
    Ok(c)
}

/// Step trace as CSV with header `t,chosen,rd,rw,A,B`.
pub fn trace_csv(ledger: &PotentialLedger) -> String {
    let mut out = String::from("t,chosen,rd,rw,A,B\n");
    for r in &ledger.trace {
        let _ = writeln!(out, "{},{},{},{},{:e},{:e}", r.t, r.chosen, r.rd, r.rw, r.a, r.b);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeavyCase {
    /// Sink component with maximum degree below 20.
    SmallDegree,
    /// Some arc heavier than `ln ln Δ / (50 ln Δ)`.
    HeavyArc,
    /// Potential walk inside the sink component.
    Walk,
}

impl HeavyCase {
    pub fn as_str(self) -> &'static str {
        match self {
            HeavyCase::SmallDegree => "small_degree",
            HeavyCase::HeavyArc => "heavy_arc",
            HeavyCase::Walk => "walk",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HeavyCycle {
    pub cycle: Cycle,
    /// Weight of the cycle's arcs after normalization.
    pub weight: f64,
    /// The lower bound that applies to the case taken.
    pub bound: f64,
    pub case: HeavyCase,
    /// `λ` used by the walk, if it ran.
    pub lambda: Option<f64>,
    /// The normalized, loop-free graph the cycle lives in.
    pub normalized: Digraph,
    /// Walk ledger, present in the walk case.
    pub ledger: Option<PotentialLedger>,
}

impl HeavyCycle {
    pub fn meets_bound(&self) -> bool {
        self.weight >= self.bound - WEIGHT_EPS
    }
}

/// Heaviest arc of the view, smallest `(tail, head)` on ties.
fn heaviest_neighbour(view: &NeighbourView) -> Option<(VertexId, VertexId, f64)> {
    let mut best: Option<(VertexId, VertexId, f64)> = None;
    for u in (0..view.vertex_count()).map(VertexId) {
        for nb in view.out(u) {
            if best.is_none_or(|(_, _, w)| nb.weight > w) {
                best = Some((u, nb.vertex, nb.weight));
            }
        }
    }
    best
}

/// Cycle made of the arc `a -> b` and a shortest path from `b` back to `a`.
pub fn extend_arc_to_cycle(view: &NeighbourView, a: VertexId, b: VertexId) -> Result<Cycle> {
    let first = *view.neighbour(a, b).ok_or_else(|| Error::InvalidParameter(format!("no arc {a} -> {b}")))?;
    let n = view.vertex_count();
    let mut parent = vec![usize::MAX; n];
    parent[b.0] = b.0;
    let mut queue = std::collections::VecDeque::from([b]);
    while let Some(x) = queue.pop_front() {
        if x == a {
            break;
        }
        for nb in view.out(x) {
            if parent[nb.vertex.0] == usize::MAX {
                parent[nb.vertex.0] = x.0;
                queue.push_back(nb.vertex);
            }
        }
    }
    if parent[a.0] == usize::MAX {
        return Err(Error::Precondition(format!("{a} is not reachable from {b}")));
    }
    let mut back = vec![a];
    let mut x = a;
    while x != b {
        x = VertexId(parent[x.0]);
        back.push(x);
    }
    back.reverse();
    // back runs b .. a; the cycle is a, b, .., predecessor of a
    let mut vertices = vec![a];
    vertices.extend_from_slice(&back[..back.len() - 1]);
    let mut edges = vec![first.edge];
    for w in back.windows(2) {
        edges.push(view.neighbour(w[0], w[1]).expect("bfs follows arcs").edge);
    }
    Ok(Cycle::from_parts(vertices, edges))
}

/// Finds a cycle whose weight meets the bound of whichever case applies.
///
/// Self-loops are dropped first; every remaining non-isolated vertex must
/// have out-weight at least 1. Weights are normalized to out-weight 1, the
/// search is confined to a sink strongly connected component `G'` with
/// maximum degree `Δ'`, and then
///
/// * `Δ' < 20`: the heaviest arc is extended to a cycle (bound 1/20);
/// * an arc heavier than `τ = ln ln Δ' / (50 ln Δ')` is extended (bound `τ`);
/// * otherwise the potential walk runs with `λ = ln ln Δ'`, or the
///   hint clamped to `[1, ln ln Δ']` (bound `λ / (50 e^λ)`).
pub fn heavy_cycle_any(g: &Digraph, lambda_hint: Option<f64>) -> Result<HeavyCycle> {
    let mut h = g.clone();
    h.strip_self_loops();
    if h.is_empty() {
        return Err(Error::NoCycle);
    }
    weighting::normalize_out_weights(&mut h)?;
    let sink = sink_scc(&h)?;
    let mut keep = vec![false; h.vertex_count()];
    for v in &sink {
        keep[v.0] = true;
    }
    let view = NeighbourView::induced(&h, &keep);
    let delta = view.max_degree();
    let (a, b, w) = heaviest_neighbour(&view).ok_or(Error::NoCycle)?;

    let finish = |cycle: Cycle, bound: f64, case: HeavyCase, lambda: Option<f64>, h: Digraph| {
        let weight = cycle.weight(&h);
        HeavyCycle { cycle, weight, bound, case, lambda, normalized: h, ledger: None }
    };
    if delta < 20 {
        let c = extend_arc_to_cycle(&view, a, b)?;
        return Ok(finish(c, 1.0 / 20.0, HeavyCase::SmallDegree, None, h));
    }
    let ln_delta = (delta as f64).ln();
    let tau = ln_delta.ln() / (50.0 * ln_delta);
    if w > tau {
        let c = extend_arc_to_cycle(&view, a, b)?;
        return Ok(finish(c, tau, HeavyCase::HeavyArc, None, h));
    }
    let top = ln_delta.ln();
    let lambda = lambda_hint.unwrap_or(top).clamp(1.0, top.max(1.0));
    let params = PotentialParams::for_view(&view, lambda)?;
    let (state, ledger) = potential_path_in(&view, Some(sink[0]).filter(|&v| view.out_degree(v) > 0), params)?;
    let c = close_heavy_cycle(&view, &state, &ledger)?;
    let mut out = finish(c, params.weight_bound(), HeavyCase::Walk, Some(lambda), h);
    out.ledger = Some(ledger);
    Ok(out)
}
