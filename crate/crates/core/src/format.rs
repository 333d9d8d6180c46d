//! Text format for decompositions.
//!
//! ```text
//! # any comment
//! min_degree 0.6666666666666666 : 0 1
//! # edges: 0 3
//! ```
//!
//! One cycle per line as `<case_tag> <w_inv> : v0 v1 .. vk`, optionally
//! followed by a `# edges:` line listing its edge ids. Other comment lines
//! and blank lines are ignored. Cycles without an edge line are matched to
//! arcs when resolved against a graph.

use std::fmt::Write as _;

use crate::decompose::{CaseTag, CycleDecomposition};
use crate::error::{Error, ParseError, Result};
use crate::graph::{Cycle, Digraph, EdgeId, VertexId};

const EDGES_PREFIX: &str = "# edges:";

pub fn write_decomposition(d: &CycleDecomposition) -> String {
    let mut out = String::new();
    for t in &d.cycles {
        let _ = write!(out, "{} {} :", t.tag, t.inv_weight);
        for v in t.cycle.vertices() {
            let _ = write!(out, " {v}");
        }
        out.push_str("\n# edges:");
        for e in t.cycle.edges() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCycle {
    pub tag: CaseTag,
    pub inv_weight: f64,
    pub vertices: Vec<VertexId>,
    pub edges: Option<Vec<EdgeId>>,
    pub line: usize,
}

fn parse_ids(toks: &str, line: usize) -> std::result::Result<Vec<usize>, ParseError> {
    toks.split_whitespace()
        .map(|t| {
            if !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseError::new(line, format!("`{t}` is not a nonnegative integer")));
            }
            t.parse::<usize>().map_err(|_| ParseError::new(line, format!("`{t}` out of range")))
        })
        .collect()
}

pub fn parse_decomposition(text: &str) -> std::result::Result<Vec<ParsedCycle>, ParseError> {
    let mut cycles: Vec<ParsedCycle> = Vec::new();
    let mut edges_allowed = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix(EDGES_PREFIX) {
            let last = cycles.last_mut().filter(|_| edges_allowed);
            let last = last.ok_or_else(|| ParseError::new(line, "edge line without a cycle line"))?;
            let ids = parse_ids(rest, line)?;
            if ids.len() != last.vertices.len() {
                return Err(ParseError::new(
                    line,
                    format!("{} edges for a cycle of {} vertices", ids.len(), last.vertices.len()),
                ));
            }
            last.edges = Some(ids.into_iter().map(EdgeId).collect());
            edges_allowed = false;
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (head, tail) =
            trimmed.split_once(':').ok_or_else(|| ParseError::new(line, "expected `<tag> <w_inv> : v0 ..`"))?;
        let mut head_toks = head.split_whitespace();
        let (Some(tag), Some(w), None) = (head_toks.next(), head_toks.next(), head_toks.next()) else {
            return Err(ParseError::new(line, "expected `<tag> <w_inv>` before `:`"));
        };
        let tag = CaseTag::parse(tag).ok_or_else(|| ParseError::new(line, format!("unknown case tag `{tag}`")))?;
        let inv_weight = w
            .parse::<f64>()
            .ok()
            .filter(|w| w.is_finite() && *w >= 0.0)
            .ok_or_else(|| ParseError::new(line, format!("weight `{w}` is not a nonnegative real")))?;
        let vertices: Vec<VertexId> = parse_ids(tail, line)?.into_iter().map(VertexId).collect();
        if vertices.is_empty() {
            return Err(ParseError::new(line, "cycle without vertices"));
        }
        cycles.push(ParsedCycle { tag, inv_weight, vertices, edges: None, line });
        edges_allowed = true;
    }
    Ok(cycles)
}

/// Turns parsed cycles into [`Cycle`]s of `g`. Listed edge ids are taken as
/// given and left for the verifier to judge; for cycles without them each
/// step takes the smallest-id live arc not used so far.
pub fn resolve(parsed: &[ParsedCycle], g: &Digraph) -> Result<Vec<Cycle>> {
    let mut used = vec![false; g.edge_capacity()];
    for p in parsed {
        for e in p.edges.iter().flatten() {
            if e.0 < used.len() {
                used[e.0] = true;
            }
        }
    }
    let mut out = Vec::with_capacity(parsed.len());
    for p in parsed {
        if let Some(edges) = &p.edges {
            out.push(Cycle::from_parts(p.vertices.clone(), edges.clone()));
            continue;
        }
        let k = p.vertices.len();
        let mut edges = Vec::with_capacity(k);
        for i in 0..k {
            let (u, v) = (p.vertices[i], p.vertices[(i + 1) % k]);
            if u.0 >= g.vertex_count() || v.0 >= g.vertex_count() {
                return Err(Error::InvalidCycle(format!("line {}: vertex out of range", p.line)));
            }
            let e = g
                .out_edges(u)
                .iter()
                .copied()
                .filter(|&e| g.head(e) == v && !used[e.0])
                .min()
                .ok_or_else(|| Error::InvalidCycle(format!("line {}: no unused arc {u} -> {v}", p.line)))?;
            used[e.0] = true;
            edges.push(e);
        }
        out.push(Cycle::from_parts(p.vertices.clone(), edges));
    }
    Ok(out)
}
