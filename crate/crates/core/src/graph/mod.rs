//! Directed multigraph with stable edge identifiers.
//!
//! Edges are never renumbered: deleting an arc flips its liveness flag and
//! swap-removes it from the two adjacency lists it sits in, so an [`EdgeId`]
//! handed out once keeps naming the same arc for the lifetime of the graph.

mod cycle;
pub mod io;
mod scc;

use std::fmt;

use crate::error::{Error, Result};

pub use cycle::{cycle_through, Cycle};
pub use scc::{sink_scc, strongly_connected_components};

/// Absolute tolerance used for every weight comparison in the crate.
pub const WEIGHT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: f64,
}

#[derive(Debug, Clone)]
struct ArcSlot {
    arc: Arc,
    live: bool,
    out_pos: usize,
    in_pos: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Digraph {
    slots: Vec<ArcSlot>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    w_out: Vec<f64>,
    live: usize,
}

/// `(delta, Delta, avg_out)` of a digraph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeSummary {
    /// Minimum of `min(d_in, d_out)` over non-isolated vertices.
    pub min_degree: usize,
    /// Maximum of `max(d_in, d_out)` over all vertices.
    pub max_degree: usize,
    /// Live arcs divided by vertex count.
    pub avg_out: f64,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            slots: Vec::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            w_out: vec![0.0; n],
            live: 0,
        }
    }

    /// Builds an unweighted graph (every weight 1) from an arc list.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Digraph::new(n);
        for (u, v) in arcs {
            g.add_edge(VertexId(u), VertexId(v), 1.0)?;
        }
        Ok(g)
    }

    pub fn from_weighted_arcs(
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut g = Digraph::new(n);
        for (u, v, w) in arcs {
            g.add_edge(VertexId(u), VertexId(v), w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, tail: VertexId, head: VertexId, weight: f64) -> Result<EdgeId> {
        let n = self.vertex_count();
        for v in [tail, head] {
            if v.0 >= n {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "arc weight must be a finite nonnegative real, got {weight}"
            )));
        }
        let id = EdgeId(self.slots.len());
        self.slots.push(ArcSlot {
            arc: Arc { tail, head, weight },
            live: true,
            out_pos: self.out_adj[tail.0].len(),
            in_pos: self.in_adj[head.0].len(),
        });
        self.out_adj[tail.0].push(id);
        self.in_adj[head.0].push(id);
        self.w_out[tail.0] += weight;
        self.live += 1;
        Ok(id)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    /// Number of live arcs.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.live
    }

    /// Number of edge identifiers ever handed out, live or not.
    #[inline]
    pub fn edge_capacity(&self) -> usize {
        self.slots.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    #[inline]
    pub fn is_live(&self, e: EdgeId) -> bool {
        self.slots.get(e.0).is_some_and(|s| s.live)
    }

    /// The arc behind a live edge id.
    pub fn arc(&self, e: EdgeId) -> Option<Arc> {
        self.slots.get(e.0).filter(|s| s.live).map(|s| s.arc)
    }

    /// The arc behind an edge id, including deleted ones.
    pub fn arc_any(&self, e: EdgeId) -> Option<Arc> {
        self.slots.get(e.0).map(|s| s.arc)
    }

    /// Live arcs in edge-id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Arc)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.live)
            .map(|(i, s)| (EdgeId(i), s.arc))
    }

    #[inline]
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_adj[v.0]
    }

    #[inline]
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_adj[v.0]
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v.0].len()
    }

    #[inline]
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v.0].len()
    }

    #[inline]
    pub fn out_weight(&self, v: VertexId) -> f64 {
        self.w_out[v.0]
    }

    #[inline]
    pub fn head(&self, e: EdgeId) -> VertexId {
        self.slots[e.0].arc.head
    }

    #[inline]
    pub fn tail(&self, e: EdgeId) -> VertexId {
        self.slots[e.0].arc.tail
    }

    #[inline]
    pub fn weight(&self, e: EdgeId) -> f64 {
        self.slots[e.0].arc.weight
    }

    #[inline]
    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.out_adj[v.0].is_empty() && self.in_adj[v.0].is_empty()
    }

    pub fn set_weight(&mut self, e: EdgeId, weight: f64) -> Result<()> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "arc weight must be a finite nonnegative real, got {weight}"
            )));
        }
        let slot = self.slots.get_mut(e.0).filter(|s| s.live).ok_or(Error::DeadEdge(e))?;
        let old = slot.arc.weight;
        slot.arc.weight = weight;
        let tail = slot.arc.tail;
        self.w_out[tail.0] += weight - old;
        Ok(())
    }

    /// Recomputes the cached out-weight sums from scratch.
    pub fn refresh_out_weights(&mut self) {
        for v in 0..self.vertex_count() {
            self.w_out[v] = self.out_adj[v].iter().map(|e| self.slots[e.0].arc.weight).sum();
        }
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<Arc> {
        let slot = self.slots.get(e.0).filter(|s| s.live).ok_or(Error::DeadEdge(e))?;
        let Arc { tail, head, weight } = slot.arc;
        let (out_pos, in_pos) = (slot.out_pos, slot.in_pos);

        let out = &mut self.out_adj[tail.0];
        out.swap_remove(out_pos);
        if let Some(&moved) = out.get(out_pos) {
            self.slots[moved.0].out_pos = out_pos;
        }
        let inn = &mut self.in_adj[head.0];
        inn.swap_remove(in_pos);
        if let Some(&moved) = inn.get(in_pos) {
            self.slots[moved.0].in_pos = in_pos;
        }

        self.slots[e.0].live = false;
        self.live -= 1;
        if self.out_adj[tail.0].is_empty() {
            self.w_out[tail.0] = 0.0;
        } else {
            self.w_out[tail.0] -= weight;
        }
        Ok(Arc { tail, head, weight })
    }

    /// Deletes every arc of `c`. Nothing is touched unless all of them are live
    /// and pairwise distinct.
    pub fn remove_cycle(&mut self, c: &Cycle) -> Result<()> {
        let mut seen = std::collections::HashSet::with_capacity(c.len());
        for &e in c.edges() {
            if !self.is_live(e) {
                return Err(Error::InvalidCycle(format!("edge {e} is not live")));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidCycle(format!("edge {e} repeated")));
            }
        }
        for &e in c.edges() {
            self.remove_edge(e)?;
        }
        Ok(())
    }

    /// Removes every self-loop and returns their ids in increasing order.
    pub fn strip_self_loops(&mut self) -> Vec<EdgeId> {
        let loops: Vec<EdgeId> =
            self.edges().filter(|(_, a)| a.tail == a.head).map(|(e, _)| e).collect();
        for &e in &loops {
            self.remove_edge(e).expect("self-loop collected from live arcs");
        }
        loops
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges().any(|(_, a)| a.tail == a.head)
    }

    pub fn degrees(&self) -> DegreeSummary {
        let n = self.vertex_count();
        if n == 0 || self.live == 0 {
            return DegreeSummary { min_degree: 0, max_degree: 0, avg_out: 0.0 };
        }
        let mut min_degree = usize::MAX;
        let mut max_degree = 0;
        for v in self.vertices() {
            let (din, dout) = (self.in_degree(v), self.out_degree(v));
            max_degree = max_degree.max(din.max(dout));
            if din + dout > 0 {
                min_degree = min_degree.min(din.min(dout));
            }
        }
        DegreeSummary { min_degree, max_degree, avg_out: self.live as f64 / n as f64 }
    }

    pub fn is_balanced(&self) -> bool {
        self.vertices().all(|v| self.in_degree(v) == self.out_degree(v))
    }

    /// Balanced, and every vertex carrying an arc sits in one weak component.
    pub fn is_eulerian(&self) -> bool {
        if !self.is_balanced() {
            return false;
        }
        let Some(start) = self.vertices().find(|&v| !self.is_isolated(v)) else {
            return true;
        };
        let mut seen = vec![false; self.vertex_count()];
        seen[start.0] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let next = self.out_adj[v.0]
                .iter()
                .map(|&e| self.head(e))
                .chain(self.in_adj[v.0].iter().map(|&e| self.tail(e)));
            for u in next {
                if !seen[u.0] {
                    seen[u.0] = true;
                    stack.push(u);
                }
            }
        }
        self.vertices().all(|v| seen[v.0] || self.is_isolated(v))
    }

    pub fn max_weight(&self) -> Result<f64> {
        self.edges()
            .map(|(_, a)| a.weight)
            .reduce(f64::max)
            .ok_or_else(|| Error::Precondition("graph has no arcs".into()))
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, a)| a.weight).sum()
    }

    /// Live arc `u -> v` of largest weight, ties to the smallest id.
    pub fn best_arc(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let mut best: Option<EdgeId> = None;
        for &e in &self.out_adj[u.0] {
            if self.head(e) != v {
                continue;
            }
            best = match best {
                Some(b) if self.weight(b) > self.weight(e) => Some(b),
                Some(b) if self.weight(b) == self.weight(e) && b < e => Some(b),
                _ => Some(e),
            };
        }
        best
    }

    /// Keeps only the arcs with both endpoints in `keep`. Vertex ids are preserved.
    pub fn induced(&self, keep: &[bool]) -> Digraph {
        let mut g = self.clone();
        let drop: Vec<EdgeId> = g
            .edges()
            .filter(|(_, a)| !(keep[a.tail.0] && keep[a.head.0]))
            .map(|(e, _)| e)
            .collect();
        for e in drop {
            g.remove_edge(e).expect("collected from live arcs");
        }
        g
    }

    /// Graphviz rendering of the live arcs.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for (_, a) in self.edges() {
            out.push_str(&format!("  {} -> {} [label=\"{}\"];\n", a.tail, a.head, a.weight));
        }
        out.push('}');
        out.push('\n');
        out
    }
}
