//! Edge-list text format.
//!
//! ```text
//! # comment lines start with '#'
//! H <n> <m> <weighted:0|1>
//! <u> <v>
//! <u> <v> <w>
//! ```
//!
//! The header is optional; without it the vertex count is one more than the
//! largest vertex mentioned and arcs may mix weighted and unweighted lines
//! (missing weights are 1). With it, the arc count and weightedness are
//! enforced. Arcs get edge ids in file order. Blank lines are skipped.

use super::{Digraph, VertexId};
use crate::error::ParseError;

/// Upper bound on the vertex count a file may declare or imply.
pub const MAX_VERTICES: usize = 1 << 22;

#[derive(Debug, Clone, Copy)]
struct Header {
    n: usize,
    m: usize,
    weighted: bool,
    line: usize,
}

fn parse_index(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::new(line, format!("{what} `{tok}` is not a nonnegative integer")));
    }
    tok.parse::<usize>().map_err(|_| ParseError::new(line, format!("{what} `{tok}` out of range")))
}

fn parse_weight(tok: &str, line: usize) -> Result<f64, ParseError> {
    let ok_chars = tok.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'));
    let w = if ok_chars { tok.parse::<f64>().ok() } else { None };
    match w {
        Some(w) if w.is_finite() && w >= 0.0 => Ok(w.abs()),
        _ => Err(ParseError::new(line, format!("weight `{tok}` is not a nonnegative real"))),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Digraph, ParseError> {
    let mut header: Option<Header> = None;
    let mut arcs: Vec<(usize, usize, Option<f64>, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks[0] == "H" {
            if header.is_some() {
                return Err(ParseError::new(line, "duplicate header"));
            }
            if !arcs.is_empty() {
                return Err(ParseError::new(line, "header after arcs"));
            }
            if toks.len() != 4 {
                return Err(ParseError::new(line, "header must be `H <n> <m> <0|1>`"));
            }
            let n = parse_index(toks[1], line, "vertex count")?;
            let m = parse_index(toks[2], line, "arc count")?;
            let weighted = match toks[3] {
                "0" => false,
                "1" => true,
                other => {
                    return Err(ParseError::new(line, format!("weighted flag `{other}` is not 0 or 1")))
                }
            };
            if n > MAX_VERTICES {
                return Err(ParseError::new(line, format!("vertex count {n} exceeds {MAX_VERTICES}")));
            }
            header = Some(Header { n, m, weighted, line });
            continue;
        }
        let (u, v, w) = match toks.as_slice() {
            [u, v] => (parse_index(u, line, "vertex")?, parse_index(v, line, "vertex")?, None),
            [u, v, w] => (
                parse_index(u, line, "vertex")?,
                parse_index(v, line, "vertex")?,
                Some(parse_weight(w, line)?),
            ),
            _ => return Err(ParseError::new(line, "expected `u v` or `u v w`")),
        };
        if let Some(h) = header {
            if u >= h.n || v >= h.n {
                return Err(ParseError::new(line, format!("vertex out of range for n = {}", h.n)));
            }
            if h.weighted != w.is_some() {
                let msg = if h.weighted { "missing weight" } else { "unexpected weight" };
                return Err(ParseError::new(line, msg));
            }
        } else if u.max(v) >= MAX_VERTICES {
            return Err(ParseError::new(line, format!("vertex exceeds {MAX_VERTICES}")));
        }
        arcs.push((u, v, w, line));
    }

    let n = match header {
        Some(h) => {
            if arcs.len() != h.m {
                return Err(ParseError::new(
                    h.line,
                    format!("header declares {} arcs, found {}", h.m, arcs.len()),
                ));
            }
            h.n
        }
        None => arcs.iter().map(|&(u, v, _, _)| u.max(v) + 1).max().unwrap_or(0),
    };
    let mut g = Digraph::new(n);
    for (u, v, w, line) in arcs {
        g.add_edge(VertexId(u), VertexId(v), w.unwrap_or(1.0))
            .map_err(|e| ParseError::new(line, e.to_string()))?;
    }
    Ok(g)
}

/// Serializes the live arcs, always with a header. Edge ids are renumbered
/// densely in id order when the graph has deleted arcs.
pub fn write_edge_list(g: &Digraph, weighted: bool) -> String {
    let mut out = format!("H {} {} {}\n", g.vertex_count(), g.edge_count(), u8::from(weighted));
    for (_, a) in g.edges() {
        if weighted {
            out.push_str(&format!("{} {} {}\n", a.tail, a.head, a.weight));
        } else {
            out.push_str(&format!("{} {}\n", a.tail, a.head));
        }
    }
    out
}

/// Like [`write_edge_list`], weighted iff some arc weight differs from 1.
pub fn to_edge_list(g: &Digraph) -> String {
    let weighted = g.edges().any(|(_, a)| a.weight != 1.0);
    write_edge_list(g, weighted)
}
