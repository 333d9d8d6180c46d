use super::{Digraph, EdgeId, VertexId};
use crate::error::{Error, Result};

/// A directed cycle given both as its arcs and as the tails of those arcs.
///
/// `vertices()[i]` is the tail of `edges()[i]`. Cycles read back from a file
/// are built with [`Cycle::from_parts`] and may violate this; everything
/// produced by the library satisfies it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Cycle {
    /// Validates `edges` as a simple closed walk of live arcs in `g`.
    pub fn from_edges(g: &Digraph, edges: Vec<EdgeId>) -> Result<Cycle> {
        if edges.is_empty() {
            return Err(Error::InvalidCycle("empty".into()));
        }
        let mut vertices = Vec::with_capacity(edges.len());
        for (i, &e) in edges.iter().enumerate() {
            let arc = g.arc(e).ok_or_else(|| Error::InvalidCycle(format!("edge {e} is not live")))?;
            let next = edges[(i + 1) % edges.len()];
            let next_tail = g
                .arc(next)
                .ok_or_else(|| Error::InvalidCycle(format!("edge {next} is not live")))?
                .tail;
            if arc.head != next_tail {
                return Err(Error::InvalidCycle(format!(
                    "edge {e} ends at {} but edge {next} starts at {next_tail}",
                    arc.head
                )));
            }
            vertices.push(arc.tail);
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCycle("repeated vertex".into()));
        }
        Ok(Cycle { vertices, edges })
    }

    /// Builds a cycle from a vertex sequence, choosing the heaviest live arc
    /// between consecutive vertices.
    pub fn from_vertices(g: &Digraph, vertices: &[VertexId]) -> Result<Cycle> {
        let k = vertices.len();
        let mut edges = Vec::with_capacity(k);
        for i in 0..k {
            let (u, v) = (vertices[i], vertices[(i + 1) % k]);
            let e = g
                .best_arc(u, v)
                .ok_or_else(|| Error::InvalidCycle(format!("no live arc {u} -> {v}")))?;
            edges.push(e);
        }
        Cycle::from_edges(g, edges)
    }

    /// Unchecked constructor; see the type docs.
    pub fn from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Cycle {
        Cycle { vertices, edges }
    }

    #[inline]
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    #[inline]
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Sum of arc weights, read from `g` (dead arcs included, so the weight
    /// stays available after the cycle was peeled off).
    pub fn weight(&self, g: &Digraph) -> f64 {
        self.edges.iter().map(|&e| g.weight(e)).sum()
    }

    /// Rotates so the smallest vertex comes first.
    pub fn canonical(mut self) -> Cycle {
        if let Some(pos) = self.vertices.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i)
        {
            self.vertices.rotate_left(pos);
            self.edges.rotate_left(pos);
        }
        self
    }
}

/// A simple cycle through `v` in a balanced graph.
///
/// Walks from `v` along unused out-arcs until the walk first comes back to
/// `v`; in a balanced graph it cannot get stuck anywhere else. Sub-loops
/// that close before reaching `v` again are cut out of the walk on the fly
/// and stay in the graph.
pub fn cycle_through(g: &Digraph, v: VertexId) -> Result<Cycle> {
    if v.0 >= g.vertex_count() {
        return Err(Error::VertexOutOfRange(v));
    }
    if g.out_degree(v) == 0 {
        return Err(Error::Precondition(format!("vertex {v} has no out-arc")));
    }
    let n = g.vertex_count();
    let mut cursor = vec![0usize; n];
    // position + 1 of each vertex on the current stack; 0 = absent
    let mut on_stack = vec![0usize; n];
    let mut stack_vertices = vec![v];
    let mut stack_edges: Vec<EdgeId> = Vec::new();
    on_stack[v.0] = 1;
    let mut x = v;
    loop {
        let outs = g.out_edges(x);
        let Some(&e) = outs.get(cursor[x.0]) else {
            return Err(Error::Precondition(format!(
                "closed walk from {v} got stuck at {x}; graph is not balanced"
            )));
        };
        cursor[x.0] += 1;
        let y = g.head(e);
        stack_edges.push(e);
        if y == v {
            break;
        }
        if on_stack[y.0] > 0 {
            // y..y loop avoids v: drop it
            let keep = on_stack[y.0];
            for w in stack_vertices.drain(keep..) {
                on_stack[w.0] = 0;
            }
            stack_edges.truncate(keep - 1);
        } else {
            stack_vertices.push(y);
            on_stack[y.0] = stack_vertices.len();
        }
        x = y;
    }
    debug_assert_eq!(stack_vertices.len(), stack_edges.len());
    Ok(Cycle { vertices: stack_vertices, edges: stack_edges })
}
