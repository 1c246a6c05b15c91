//! Text graph files: a header line `n m`, then `m` edge lines `u v`, then
//! optional `input i <string>` lines. Blank lines and `#` comments are skipped.

use std::fmt::Write as _;

use super::{Graph, GraphError, Instance};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn field(line: usize, tok: Option<&str>, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

/// Parse a graph file. Vertices without an `input` line get the empty string.
pub fn parse_instance(text: &str) -> Result<Instance, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m`"))?;
    let mut toks = header.split_whitespace();
    let n = field(hline, toks.next(), "vertex count")?;
    let m = field(hline, toks.next(), "edge count")?;
    if toks.next().is_some() {
        return Err(parse_err(hline, "header has extra fields"));
    }
    if n == 0 {
        return Err(parse_err(hline, "graph needs at least one vertex"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for k in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(hline, format!("expected {m} edges, found {k}")))?;
        let mut toks = l.split_whitespace();
        let u = field(ln, toks.next(), "edge endpoint")?;
        let v = field(ln, toks.next(), "edge endpoint")?;
        if toks.next().is_some() {
            return Err(parse_err(ln, "edge line has extra fields"));
        }
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("vertex {} out of range for {n} vertices", u.max(v))));
        }
        if u == v {
            return Err(parse_err(ln, format!("self-loop at vertex {u}")));
        }
        let e = (u.min(v), u.max(v));
        if !seen.insert(e) {
            return Err(parse_err(ln, format!("duplicate edge {}-{}", e.0, e.1)));
        }
        edges.push(e);
    }

    let mut inputs: Vec<Option<String>> = vec![None; n];
    for (ln, l) in lines {
        let rest = l
            .strip_prefix("input ")
            .ok_or_else(|| parse_err(ln, "expected `input i <string>`"))?;
        let (id, value) = rest.split_once(' ').unwrap_or((rest, ""));
        let i = field(ln, Some(id), "vertex id")?;
        if i >= n {
            return Err(parse_err(ln, format!("vertex {i} out of range for {n} vertices")));
        }
        if inputs[i].is_some() {
            return Err(parse_err(ln, format!("second input for vertex {i}")));
        }
        inputs[i] = Some(value.trim().to_string());
    }

    let graph = Graph::new(n, &edges).map_err(|e| parse_err(hline, e.to_string()))?;
    Instance::new(graph, inputs.into_iter().map(Option::unwrap_or_default).collect())
}

/// Render an instance; empty inputs are omitted.
pub fn write_instance(inst: &Instance) -> String {
    let g = inst.graph();
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    for (i, x) in inst.inputs().iter().enumerate() {
        if !x.is_empty() {
            let _ = writeln!(out, "input {i} {x}");
        }
    }
    out
}
