//! Edge-list text format.
//!
//! One edge per line: `u v` (unweighted) or `u v w` (weighted), 0-based
//! vertex ids separated by whitespace. Lines starting with `#` and blank
//! lines are ignored. An optional first line `n <count>` fixes the vertex
//! count; otherwise it is one more than the largest id.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexId, WeightedGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub vertex_count: usize,
    pub edges: Vec<(VertexId, VertexId, Option<f64>)>,
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut header: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if tokens[0] == "n" {
            if seen_content {
                return Err(parse_err("header `n <count>` must come first".into()));
            }
            if tokens.len() != 2 {
                return Err(parse_err("header must be `n <count>`".into()));
            }
            let count = tokens[1]
                .parse()
                .map_err(|_| parse_err(format!("bad vertex count `{}`", tokens[1])))?;
            header = Some(count);
            seen_content = true;
            continue;
        }
        seen_content = true;
        if !(2..=3).contains(&tokens.len()) {
            return Err(parse_err(format!(
                "expected 2 or 3 tokens, found {}",
                tokens.len()
            )));
        }
        let vertex = |t: &str| -> Result<VertexId> {
            t.parse()
                .map_err(|_| parse_err(format!("bad vertex id `{t}`")))
        };
        let u = vertex(tokens[0])?;
        let v = vertex(tokens[1])?;
        let w = match tokens.get(2) {
            Some(t) => Some(
                t.parse::<f64>()
                    .map_err(|_| parse_err(format!("bad weight `{t}`")))?,
            ),
            None => None,
        };
        edges.push((u, v, w));
    }
    let vertex_count = header.unwrap_or_else(|| {
        edges
            .iter()
            .map(|&(u, v, _)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
    });
    Ok(EdgeList {
        vertex_count,
        edges,
    })
}

pub fn parse_multigraph(text: &str) -> Result<Multigraph> {
    let list = parse_edge_list(text)?;
    let mut edges = Vec::with_capacity(list.edges.len());
    for (i, (u, v, w)) in list.edges.into_iter().enumerate() {
        if w.is_some() {
            return Err(Error::Parse {
                line: 0,
                message: format!("edge {i} is weighted; expected an unweighted edge list"),
            });
        }
        edges.push((u, v));
    }
    Multigraph::new(list.vertex_count, edges)
}

/// Unweighted lines get weight 1.
pub fn parse_weighted(text: &str) -> Result<WeightedGraph> {
    let list = parse_edge_list(text)?;
    WeightedGraph::new(
        list.vertex_count,
        list.edges
            .into_iter()
            .map(|(u, v, w)| (u, v, w.unwrap_or(1.0)))
            .collect(),
    )
}

pub fn write_multigraph(graph: &Multigraph) -> String {
    let mut out = String::with_capacity(12 * graph.edge_count() + 16);
    out.push_str(&format!("n {}\n", graph.vertex_count()));
    for &(u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Weights use the shortest representation that parses back to the same `f64`.
pub fn write_weighted(graph: &WeightedGraph) -> String {
    let mut out = String::with_capacity(20 * graph.edge_count() + 16);
    out.push_str(&format!("n {}\n", graph.vertex_count()));
    for &(u, v, w) in graph.edges() {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}

pub fn read_multigraph(path: impl AsRef<Path>) -> Result<Multigraph> {
    parse_multigraph(&fs::read_to_string(path)?)
}

pub fn read_weighted(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_weighted(&fs::read_to_string(path)?)
}
