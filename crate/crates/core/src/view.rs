//! Simple-digraph view used by the walks.
//!
//! Parallel arcs `u -> v` collapse into one neighbour entry whose weight is
//! the sum of theirs; the heaviest of them (smallest id on ties) represents
//! the pair when a cycle is turned back into edge ids. Self-loops are
//! dropped. Neighbour lists are sorted by vertex id.

use crate::graph::{Arc, Digraph, EdgeId, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbour {
    pub vertex: VertexId,
    pub weight: f64,
    pub edge: EdgeId,
}

#[derive(Debug, Clone)]
pub struct NeighbourView {
    out: Vec<Vec<Neighbour>>,
    inn: Vec<Vec<(VertexId, f64)>>,
    max_weight: f64,
    max_degree: usize,
}

impl NeighbourView {
    /// View of `g` with its own arc weights.
    pub fn new(g: &Digraph) -> Self {
        Self::build(g, None, |_, a| a.weight)
    }

    /// View of `g` under inverse out-degree weights, computed on the fly.
    pub fn inverse_out_degree(g: &Digraph) -> Self {
        Self::build(g, None, |g, a| 1.0 / g.out_degree(a.tail) as f64)
    }

    /// View of the subgraph induced by `keep` with the graph's own weights.
    pub fn induced(g: &Digraph, keep: &[bool]) -> Self {
        Self::build(g, Some(keep), |_, a| a.weight)
    }

    fn build(g: &Digraph, keep: Option<&[bool]>, weight: impl Fn(&Digraph, &Arc) -> f64) -> Self {
        let n = g.vertex_count();
        let kept = |v: VertexId| keep.is_none_or(|k| k[v.0]);
        let mut arcs: Vec<(VertexId, VertexId, f64, EdgeId)> = g
            .edges()
            .filter(|(_, a)| a.tail != a.head && kept(a.tail) && kept(a.head))
            .map(|(e, a)| (a.tail, a.head, weight(g, &a), e))
            .collect();
        arcs.sort_by_key(|&(t, h, _, e)| (t, h, e));

        let mut out: Vec<Vec<Build>> = (0..n).map(|_| Vec::new()).collect();
        let mut out_arcs = vec![0usize; n];
        let mut in_arcs = vec![0usize; n];
        for &(t, h, w, e) in &arcs {
            out_arcs[t.0] += 1;
            in_arcs[h.0] += 1;
            let list = &mut out[t.0];
            match list.last_mut() {
                Some(last) if last.vertex == h => {
                    if w > last.weight_of_edge {
                        last.edge = e;
                        last.weight_of_edge = w;
                    }
                    last.weight += w;
                }
                _ => list.push(Build { vertex: h, weight: w, edge: e, weight_of_edge: w }),
            }
        }
        let out: Vec<Vec<Neighbour>> = out
            .into_iter()
            .map(|l| l.into_iter().map(|b| Neighbour { vertex: b.vertex, weight: b.weight, edge: b.edge }).collect())
            .collect();
        let mut inn: Vec<Vec<(VertexId, f64)>> = vec![Vec::new(); n];
        for (t, list) in out.iter().enumerate() {
            for nb in list {
                inn[nb.vertex.0].push((VertexId(t), nb.weight));
            }
        }
        let max_weight = out.iter().flatten().map(|nb| nb.weight).fold(0.0, f64::max);
        let max_degree = out_arcs.iter().zip(&in_arcs).map(|(a, b)| *a.max(b)).max().unwrap_or(0);
        NeighbourView { out, inn, max_weight, max_degree }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    #[inline]
    pub fn out(&self, v: VertexId) -> &[Neighbour] {
        &self.out[v.0]
    }

    /// In-neighbours with the combined weight of their arcs into `v`.
    #[inline]
    pub fn inn(&self, v: VertexId) -> &[(VertexId, f64)] {
        &self.inn[v.0]
    }

    /// Number of distinct out-neighbours.
    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v.0].len()
    }

    pub fn out_weight(&self, v: VertexId) -> f64 {
        self.out[v.0].iter().map(|nb| nb.weight).sum()
    }

    /// Combined weight of `u -> v`, 0 when absent.
    pub fn weight(&self, u: VertexId, v: VertexId) -> f64 {
        self.neighbour(u, v).map_or(0.0, |nb| nb.weight)
    }

    pub fn neighbour(&self, u: VertexId, v: VertexId) -> Option<&Neighbour> {
        let list = &self.out[u.0];
        list.binary_search_by_key(&v, |nb| nb.vertex).ok().map(|i| &list[i])
    }

    /// Largest combined neighbour weight.
    #[inline]
    pub fn max_weight(&self) -> f64 {
        self.max_weight
    }

    /// Largest arc in- or out-degree, counting parallel arcs.
    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn has_arcs(&self, v: VertexId) -> bool {
        !self.out[v.0].is_empty() || !self.inn[v.0].is_empty()
    }

    /// Vertex with the most out-neighbours, smallest id on ties.
    pub fn max_out_degree_vertex(&self) -> Option<VertexId> {
        (0..self.vertex_count())
            .map(VertexId)
            .filter(|&v| self.out_degree(v) > 0)
            .max_by(|&a, &b| self.out_degree(a).cmp(&self.out_degree(b)).then(b.cmp(&a)))
    }
}

struct Build {
    vertex: VertexId,
    weight: f64,
    edge: EdgeId,
    weight_of_edge: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_arcs_merge() {
        let g = Digraph::from_weighted_arcs(3, [(0, 1, 0.25), (0, 1, 0.5), (0, 2, 0.25), (1, 0, 1.0), (2, 2, 9.0)])
            .unwrap();
        let view = NeighbourView::new(&g);
        assert_eq!(view.out_degree(VertexId(0)), 2);
        let nb = view.neighbour(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(nb.weight, 0.75);
        assert_eq!(nb.edge, EdgeId(1));
        assert_eq!(view.out_degree(VertexId(2)), 0);
        assert_eq!(view.max_weight(), 1.0);
        assert_eq!(view.max_degree(), 3);
        assert_eq!(view.inn(VertexId(1)), &[(VertexId(0), 0.75)]);
        assert_eq!(view.max_out_degree_vertex(), Some(VertexId(0)));
    }

    #[test]
    fn induced_subview() {
        let g = Digraph::from_arcs(4, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]).unwrap();
        let view = NeighbourView::induced(&g, &[false, false, true, true]);
        assert!(!view.has_arcs(VertexId(0)));
        assert_eq!(view.out_degree(VertexId(2)), 1);
        assert_eq!(view.inn(VertexId(2)), &[(VertexId(3), 1.0)]);
    }
}
