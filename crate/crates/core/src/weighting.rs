//! Arc weightings: inverse out-degree and out-weight normalization.

use crate::error::{Error, Result};
use crate::graph::{Digraph, WEIGHT_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightingKind {
    UniformOne,
    InverseOutDegree,
    Explicit,
}

/// Sets `w(u, v) = 1 / d_out(u)` on every live arc.
pub fn apply_inverse_out_degree(g: &mut Digraph) -> Result<()> {
    if let Some(v) = g.vertices().find(|&v| g.out_degree(v) == 0 && g.in_degree(v) > 0) {
        return Err(Error::Precondition(format!(
            "vertex {v} is a sink; inverse out-degree weighting is undefined"
        )));
    }
    set_weights(g, |g, tail| 1.0 / g.out_degree(tail) as f64);
    Ok(())
}

pub fn apply_uniform(g: &mut Digraph, weight: f64) -> Result<()> {
    if !(weight.is_finite() && weight >= 0.0) {
        return Err(Error::InvalidParameter(format!("weight {weight}")));
    }
    set_weights(g, |_, _| weight);
    Ok(())
}

fn set_weights(g: &mut Digraph, f: impl Fn(&Digraph, crate::graph::VertexId) -> f64) {
    let updates: Vec<_> = g.edges().map(|(e, a)| (e, f(g, a.tail))).collect();
    for (e, w) in updates {
        g.set_weight(e, w).expect("edge taken from the live set");
    }
    g.refresh_out_weights();
}

/// Scales each vertex's out-arcs by `1 / w_out(v)` so every non-isolated
/// vertex ends with out-weight 1. Only ever decreases weights.
pub fn normalize_out_weights(g: &mut Digraph) -> Result<()> {
    for v in g.vertices() {
        if g.is_isolated(v) {
            continue;
        }
        if g.out_weight(v) < 1.0 - WEIGHT_EPS {
            return Err(Error::Precondition(format!(
                "vertex {v} has out-weight {} < 1",
                g.out_weight(v)
            )));
        }
    }
    let updates: Vec<_> = g
        .edges()
        .map(|(e, a)| {
            let total = g.out_weight(a.tail);
            // keeps arcs already within tolerance of 1 untouched
            let scaled = if (total - 1.0).abs() <= WEIGHT_EPS { a.weight } else { a.weight / total };
            (e, scaled.min(a.weight))
        })
        .collect();
    for (e, w) in updates {
        g.set_weight(e, w)?;
    }
    g.refresh_out_weights();
    Ok(())
}

/// True when every non-isolated vertex has out-weight 1 within tolerance.
pub fn has_unit_out_weights(g: &Digraph) -> bool {
    g.vertices().all(|v| g.is_isolated(v) || (g.out_weight(v) - 1.0).abs() <= WEIGHT_EPS)
}

pub fn max_weight(g: &Digraph) -> Result<f64> {
    g.max_weight()
}
