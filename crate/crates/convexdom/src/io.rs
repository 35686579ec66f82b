//! Graph files: DIMACS (`p edge n m` / `e u v` / `c ...`) and plain edge
//! lists (`u v` per line, `#` comments).

use std::fmt::Write as _;
use std::path::Path;

use convexdom_core::{Graph, GraphError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dimacs,
    EdgeList,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    InvalidEdge { line: usize, source: GraphError },
    #[error(transparent)]
    Invalid(#[from] GraphError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    InFile {
        path: String,
        source: Box<ParseError>,
    },
}

impl ParseError {
    fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            msg: msg.into(),
        }
    }
}

/// DIMACS when the first meaningful line is a `c`, `p` or `e` record.
pub fn detect_format(text: &str) -> GraphFormat {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first.and_then(|l| l.split_whitespace().next()) {
        Some("c" | "p" | "e") => GraphFormat::Dimacs,
        _ => GraphFormat::EdgeList,
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, ParseError> {
    match format {
        GraphFormat::Dimacs => parse_dimacs(text),
        GraphFormat::EdgeList => parse_edge_list(text),
    }
}

/// Reads a graph file, auto-detecting the format.
pub fn read_graph(path: &Path) -> Result<Graph, ParseError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_graph(&text, detect_format(&text)).map_err(|e| ParseError::InFile {
        path: shown,
        source: Box::new(e),
    })
}

fn parse_id(line: usize, tok: Option<&str>, what: &str) -> Result<u32, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::syntax(line, format!("missing {what}")))?;
    tok.parse::<u32>()
        .map_err(|_| ParseError::syntax(line, format!("invalid {what} `{tok}`")))
}

/// Maps an edge-level validation error back to the line that produced it.
fn locate(err: GraphError, lines: &[usize]) -> ParseError {
    match err.edge_index() {
        Some(e) => ParseError::InvalidEdge {
            line: lines[e],
            source: err,
        },
        None => ParseError::Invalid(err),
    }
}

fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, u32, usize)> = None;
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(ParseError::syntax(line, "second problem line"));
                }
                match toks.next() {
                    Some("edge" | "col") => {}
                    other => {
                        return Err(ParseError::syntax(
                            line,
                            format!("expected `p edge`, found `p {}`", other.unwrap_or("")),
                        ))
                    }
                }
                let n = parse_id(line, toks.next(), "vertex count")?;
                let m = parse_id(line, toks.next(), "edge count")? as usize;
                header = Some((line, n, m));
            }
            Some("e") => {
                if header.is_none() {
                    return Err(ParseError::syntax(line, "edge before problem line"));
                }
                let u = parse_id(line, toks.next(), "vertex id")?;
                let v = parse_id(line, toks.next(), "vertex id")?;
                if u == 0 || v == 0 {
                    return Err(ParseError::syntax(line, "vertex ids start at 1"));
                }
                edges.push((u, v));
                lines.push(line);
            }
            Some(other) => {
                return Err(ParseError::syntax(
                    line,
                    format!("unknown record `{other}`"),
                ))
            }
        }
        if toks.next().is_some() {
            return Err(ParseError::syntax(line, "trailing tokens"));
        }
    }
    let (hline, n, m) = header.ok_or_else(|| ParseError::syntax(1, "missing `p edge` line"))?;
    if m != edges.len() {
        return Err(ParseError::syntax(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::with_vertex_count(n, &edges).map_err(|e| locate(e, &lines))
}

fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(first) = toks.next() else { continue };
        let u = parse_id(line, Some(first), "vertex id")?;
        let v = parse_id(line, toks.next(), "vertex id")?;
        if toks.next().is_some() {
            return Err(ParseError::syntax(line, "expected two vertex ids"));
        }
        if u == 0 || v == 0 {
            return Err(ParseError::syntax(line, "vertex ids start at 1"));
        }
        edges.push((u, v));
        lines.push(line);
    }
    if edges.is_empty() {
        return Err(ParseError::syntax(1, "no edges"));
    }
    Graph::from_edges(&edges).map_err(|e| locate(e, &lines))
}

/// DIMACS text for a graph whose labels are exactly `1..=n`; other graphs
/// are written with their compacted ids (label order is preserved).
pub fn write_dimacs(g: &Graph, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "c {line}");
    }
    let _ = writeln!(out, "p edge {} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Edge list with the original vertex labels.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", g.label(u), g.label(v));
    }
    out
}
