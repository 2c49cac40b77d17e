//! Graph text format.
//!
//! One item per line, space separated, `#` starts a comment:
//!
//! ```text
//! spatialgraph v1
//! tr 50
//! node 0 0 0
//! node 1 36 0
//! edge 0 1 spatial
//! ```
//!
//! Writers emit nodes in ascending id order and edges sorted by (u, v) with
//! u < v, so equal graphs serialize to identical bytes. Readers validate the
//! same invariants the in-memory graph enforces, so a file with an in-range
//! bypass edge or an out-of-range spatial edge is rejected with its line
//! number.

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::graph::{EdgeKind, GraphError, NodeId, Point2D, SpatialGraph};

pub const FORMAT_HEADER: &str = "spatialgraph v1";

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: GraphError,
    },
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphFileError {
    GraphFileError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_real(line: usize, token: &str, what: &str) -> Result<f64, GraphFileError> {
    token
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("malformed {what} `{token}`")))
}

fn parse_index(line: usize, token: &str, what: &str) -> Result<usize, GraphFileError> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("malformed {what} `{token}`")))
}

/// Canonical serialization of a graph.
pub fn write_graph_string(g: &SpatialGraph) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("tr {}\n", g.tr()));
    for v in g.node_ids() {
        let p = g.position(v).expect("iterating valid ids");
        out.push_str(&format!("node {v} {} {}\n", p.x, p.y));
    }
    for (u, v, kind) in g.edges() {
        out.push_str(&format!("edge {u} {v} {kind}\n"));
    }
    out
}

pub fn write_graph(g: &SpatialGraph, path: &Path) -> Result<(), GraphFileError> {
    let mut file = fs::File::create(path)?;
    file.write_all(write_graph_string(g).as_bytes())?;
    Ok(())
}

/// Parses the text format, enforcing the header, a positive tr line, dense
/// ascending node ids, and edge kind/distance validity.
pub fn read_graph_string(input: &str) -> Result<SpatialGraph, GraphFileError> {
    let mut graph: Option<SpatialGraph> = None;
    let mut saw_header = false;
    let mut node_lines = 0usize;
    let mut edge_seen = false;
    let mut last_line = 0usize;

    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !saw_header {
            if content != FORMAT_HEADER {
                return Err(parse_err(
                    line,
                    format!("expected `{FORMAT_HEADER}` header, found `{content}`"),
                ));
            }
            saw_header = true;
            continue;
        }
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().expect("non-empty line has a first token");
        match keyword {
            "tr" => {
                if graph.is_some() {
                    return Err(parse_err(line, "duplicate `tr` line"));
                }
                let value = tokens
                    .next()
                    .ok_or_else(|| parse_err(line, "missing transmission range value"))?;
                let tr = parse_real(line, value, "transmission range")?;
                graph = Some(
                    SpatialGraph::new(tr)
                        .map_err(|source| GraphFileError::Invalid { line, source })?,
                );
            }
            "node" => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "`node` before the `tr` line"))?;
                if edge_seen {
                    return Err(parse_err(line, "`node` after the edge section"));
                }
                let id = parse_index(
                    line,
                    tokens
                        .next()
                        .ok_or_else(|| parse_err(line, "missing node id"))?,
                    "node id",
                )?;
                if id != node_lines {
                    return Err(parse_err(
                        line,
                        format!("node ids must be dense and ascending; expected {node_lines}, found {id}"),
                    ));
                }
                let x = parse_real(
                    line,
                    tokens
                        .next()
                        .ok_or_else(|| parse_err(line, "missing x coordinate"))?,
                    "x coordinate",
                )?;
                let y = parse_real(
                    line,
                    tokens
                        .next()
                        .ok_or_else(|| parse_err(line, "missing y coordinate"))?,
                    "y coordinate",
                )?;
                g.add_node(Point2D::new(x, y))
                    .map_err(|source| GraphFileError::Invalid { line, source })?;
                node_lines += 1;
            }
            "edge" => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "`edge` before the `tr` line"))?;
                if node_lines == 0 {
                    return Err(parse_err(line, "edge section with an empty node section"));
                }
                edge_seen = true;
                let u = parse_index(
                    line,
                    tokens
                        .next()
                        .ok_or_else(|| parse_err(line, "missing edge endpoint"))?,
                    "edge endpoint",
                )?;
                let v = parse_index(
                    line,
                    tokens
                        .next()
                        .ok_or_else(|| parse_err(line, "missing edge endpoint"))?,
                    "edge endpoint",
                )?;
                let kind_token = tokens
                    .next()
                    .ok_or_else(|| parse_err(line, "missing edge kind"))?;
                let kind = EdgeKind::parse(kind_token).ok_or_else(|| {
                    parse_err(
                        line,
                        format!("unknown edge kind `{kind_token}` (expected spatial or bypass)"),
                    )
                })?;
                g.add_edge(NodeId::new(u), NodeId::new(v), kind)
                    .map_err(|source| GraphFileError::Invalid { line, source })?;
            }
            other => {
                return Err(parse_err(line, format!("unknown directive `{other}`")));
            }
        }
        if let Some(extra) = tokens.next() {
            return Err(parse_err(line, format!("trailing token `{extra}`")));
        }
    }

    if !saw_header {
        return Err(parse_err(last_line.max(1), "missing format header"));
    }
    let graph = graph.ok_or_else(|| parse_err(last_line.max(1), "missing `tr` line"))?;
    if node_lines == 0 {
        return Err(parse_err(last_line.max(1), "graph has no nodes"));
    }
    Ok(graph)
}

pub fn read_graph(path: &Path) -> Result<SpatialGraph, GraphFileError> {
    read_graph_string(&fs::read_to_string(path)?)
}
