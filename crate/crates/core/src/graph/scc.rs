use super::{Digraph, VertexId};
use crate::error::{Error, Result};

/// Strongly connected components over live arcs (iterative Tarjan).
///
/// Returns a component index per vertex and the number of components.
/// Components are numbered in the order Tarjan completes them, which is a
/// reverse topological order of the condensation.
pub fn strongly_connected_components(g: &Digraph) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let n = g.vertex_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut count = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, pos)) = call.last() {
            let outs = g.out_edges(VertexId(v));
            if let Some(&e) = outs.get(pos) {
                call.last_mut().expect("non-empty").1 += 1;
                let w = g.head(e).0;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (comp, count)
}

/// Vertex set of a strongly connected component with no arc leaving it.
///
/// Isolated vertices are ignored. Among several sink components the one
/// holding the smallest vertex id is returned; the set is sorted.
pub fn sink_scc(g: &Digraph) -> Result<Vec<VertexId>> {
    if g.is_empty() {
        return Err(Error::Precondition("sink component of an arcless graph".into()));
    }
    let (comp, count) = strongly_connected_components(g);
    let mut leaks = vec![false; count];
    for (_, a) in g.edges() {
        if comp[a.tail.0] != comp[a.head.0] {
            leaks[comp[a.tail.0]] = true;
        }
    }
    let chosen = g
        .vertices()
        .find(|&v| !g.is_isolated(v) && !leaks[comp[v.0]])
        .map(|v| comp[v.0])
        .ok_or_else(|| Error::Internal("finite digraph without a sink component".into()))?;
    Ok(g.vertices().filter(|v| comp[v.0] == chosen).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> Vec<VertexId> {
        v.iter().copied().map(VertexId).collect()
    }

    fn exits(g: &Digraph, set: &[VertexId]) -> usize {
        g.edges().filter(|(_, a)| set.contains(&a.tail) && !set.contains(&a.head)).count()
    }

    #[test]
    fn triangle_into_triangle() {
        let g = Digraph::from_arcs(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
            .unwrap();
        let s = sink_scc(&g).unwrap();
        assert_eq!(s, ids(&[3, 4, 5]));
        assert_eq!(exits(&g, &s), 0);
    }

    #[test]
    fn strongly_connected_whole() {
        let g = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(sink_scc(&g).unwrap(), ids(&[0, 1, 2]));
    }

    #[test]
    fn dag_sink() {
        let g = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(sink_scc(&g).unwrap(), ids(&[2]));
        let (_, count) = strongly_connected_components(&g);
        assert_eq!(count, 3);
    }

    #[test]
    fn isolated_vertex_is_not_a_sink() {
        let g = Digraph::from_arcs(4, [(1, 2), (2, 1)]).unwrap();
        assert_eq!(sink_scc(&g).unwrap(), ids(&[1, 2]));
        assert!(sink_scc(&Digraph::new(3)).is_err());
    }

    #[test]
    fn long_path_does_not_overflow() {
        let n = 200_000;
        let g = Digraph::from_arcs(n, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        assert_eq!(sink_scc(&g).unwrap(), ids(&[n - 1]));
    }
}
