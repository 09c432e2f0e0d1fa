//! Graph text format:
//!
//! ```text
//! c optional comments
//! p kcut <n> <m>
//! e <u> <v> <w>      (m lines, 0-based endpoints, w >= 1)
//! ```
//!
//! Repeated pairs are merged by adding weights; the parser reports each
//! merge as a warning.

use std::fmt::Write as _;

use crate::error::{KcutError, Result};
use crate::graph::{Weight, WeightedGraph};

#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: WeightedGraph,
    pub warnings: Vec<String>,
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let err = |line: usize, msg: String| KcutError::Parse { line, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, Weight)> = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(err(lineno, "second header line".into()));
                }
                if fields.len() != 4 || fields[1] != "kcut" {
                    return Err(err(lineno, "expected `p kcut <n> <m>`".into()));
                }
                let n = fields[2].parse().map_err(|e| err(lineno, format!("bad n: {e}")))?;
                let m = fields[3].parse().map_err(|e| err(lineno, format!("bad m: {e}")))?;
                header = Some((n, m));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(err(lineno, "edge before header".into()));
                };
                if fields.len() != 4 {
                    return Err(err(lineno, "expected `e <u> <v> <w>`".into()));
                }
                let num = |s: &str, what: &str| -> Result<u64> {
                    s.parse().map_err(|e| err(lineno, format!("bad {what}: {e}")))
                };
                let (u, v, w) = (
                    num(fields[1], "u")? as usize,
                    num(fields[2], "v")? as usize,
                    num(fields[3], "w")?,
                );
                if u >= n || v >= n {
                    return Err(err(lineno, format!("endpoint out of range for n = {n}")));
                }
                if u == v {
                    return Err(err(lineno, format!("self-loop at {u}")));
                }
                if w == 0 {
                    return Err(err(lineno, "weight must be at least 1".into()));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    warnings.push(format!("line {lineno}: merged duplicate edge ({u}, {v})"));
                }
                edges.push((u, v, w));
            }
            other => return Err(err(lineno, format!("unknown line type `{other}`"))),
        }
    }
    let last = text.lines().count();
    let (n, m) = header.ok_or_else(|| err(last, "missing `p kcut` header".into()))?;
    if edges.len() != m {
        return Err(err(last, format!("header promises {m} edges, found {}", edges.len())));
    }
    let graph = WeightedGraph::new(n, edges)?;
    Ok(ParsedGraph { graph, warnings })
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = format!("p kcut {} {}\n", g.n(), g.m());
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, e.w).unwrap();
    }
    out
}
