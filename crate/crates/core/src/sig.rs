//! The `.sig` text format for side-information graphs.
//!
//! ```text
//! # comments start with '#'
//! n 5
//! undirected      (optional; must precede the edges)
//! e 1 2           (1-based; client 1 knows message 2)
//! ```
//!
//! Indices are 1-based in files and 0-based everywhere else in the crate;
//! the conversion happens only here.

use crate::graph::{GraphError, SideInfoGraph, VertexSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for SigError {}

fn err(line: usize, message: impl Into<String>) -> SigError {
    SigError { line, message: message.into() }
}

/// Parses `.sig` text. Errors carry 1-based line numbers.
pub fn parse_sig(text: &str) -> Result<SideInfoGraph, SigError> {
    let mut n: Option<usize> = None;
    let mut undirected = false;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut saw_edge = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next().unwrap() {
            "n" => {
                if n.is_some() {
                    return Err(err(lineno, "duplicate 'n' directive"));
                }
                let count: usize = tok
                    .next()
                    .ok_or_else(|| err(lineno, "'n' needs a vertex count"))?
                    .parse()
                    .map_err(|_| err(lineno, "invalid vertex count"))?;
                if count == 0 {
                    return Err(err(lineno, "vertex count must be positive"));
                }
                n = Some(count);
            }
            "undirected" => {
                if saw_edge {
                    return Err(err(lineno, "'undirected' must appear before any edges"));
                }
                undirected = true;
            }
            "e" => {
                let nv = n.ok_or_else(|| err(lineno, "'e' before 'n' directive"))?;
                let mut next_idx = |what: &str| -> Result<usize, SigError> {
                    let t = tok.next().ok_or_else(|| err(lineno, format!("'e' missing {what}")))?;
                    let v: usize =
                        t.parse().map_err(|_| err(lineno, format!("invalid {what} '{t}'")))?;
                    if v == 0 || v > nv {
                        return Err(err(lineno, format!("vertex {v} out of range 1..={nv}")));
                    }
                    Ok(v - 1)
                };
                let i = next_idx("source vertex")?;
                let j = next_idx("target vertex")?;
                if i == j {
                    return Err(err(lineno, format!("self-loop at vertex {}", i + 1)));
                }
                saw_edge = true;
                arcs.push((i, j));
                if undirected {
                    arcs.push((j, i));
                }
            }
            other => return Err(err(lineno, format!("unknown directive '{other}'"))),
        }
        if let Some(extra) = tok.next() {
            return Err(err(lineno, format!("trailing token '{extra}'")));
        }
    }

    let n = n.ok_or_else(|| err(text.lines().count().max(1), "missing 'n' directive"))?;
    SideInfoGraph::new(n, &arcs).map_err(|e| match e {
        GraphError::TooLarge { n } => err(1, format!("{n} vertices exceeds the supported maximum")),
        other => err(1, other.to_string()),
    })
}

/// Serializes a graph to `.sig` text. Symmetric graphs are written in
/// `undirected` form with each edge once.
pub fn write_sig(g: &SideInfoGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("n {}\n", g.n()));
    if g.is_undirected() {
        out.push_str("undirected\n");
        for (i, j) in g.edges() {
            out.push_str(&format!("e {} {}\n", i + 1, j + 1));
        }
    } else {
        for (i, j) in g.arcs() {
            out.push_str(&format!("e {} {}\n", i + 1, j + 1));
        }
    }
    out
}

/// Convenience for tests and the CLI: vertex set from 1-based indices.
pub fn vertex_set_1based(ids: &[usize]) -> VertexSet {
    VertexSet::from_iter(ids.iter().map(|&v| v - 1))
}
