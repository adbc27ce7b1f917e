//! Graph file formats: JSON (with cube metadata), edge list, graph6, DIMACS.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ccs::{CcsGraph, CubeRecord};
use crate::graph::{Graph, GraphError, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Edgelist,
    Graph6,
    Dimacs,
}

impl Format {
    /// Guess from a file extension; anything unknown is read as an edge list.
    pub fn from_path(path: &Path) -> Format {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("json") => Format::Json,
            Some("g6") | Some("graph6") => Format::Graph6,
            Some("dimacs") | Some("col") => Format::Dimacs,
            _ => Format::Edgelist,
        }
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// JSON form of a graph. `n` and `cubes` are present for generated CCS graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub vertex_count: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubes: Option<Vec<CubeRecord>>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDocument {
            n: None,
            vertex_count: g.vertex_count(),
            edges: g.edges().iter().map(|e| [e.0, e.1]).collect(),
            cubes: None,
        }
    }

    pub fn from_ccs(ccs: &CcsGraph) -> Self {
        GraphDocument {
            n: Some(ccs.n()),
            cubes: Some(ccs.cubes().to_vec()),
            ..Self::from_graph(ccs.graph())
        }
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        Graph::new(self.vertex_count, self.edges.iter().map(|&[a, b]| (a, b)))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("document serializes");
        out.push('\n');
        out
    }
}

/// A parsed graph file.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub graph: Graph,
    /// Present only for JSON input.
    pub document: Option<GraphDocument>,
}

pub fn emit(format: Format, g: &Graph) -> String {
    match format {
        Format::Json => GraphDocument::from_graph(g).to_json(),
        Format::Edgelist => to_edgelist(g),
        Format::Graph6 => {
            let mut s = to_graph6(g);
            s.push('\n');
            s
        }
        Format::Dimacs => to_dimacs(g),
    }
}

/// Like [`emit`], but JSON output carries the cube metadata.
pub fn emit_ccs(format: Format, ccs: &CcsGraph) -> String {
    match format {
        Format::Json => GraphDocument::from_ccs(ccs).to_json(),
        other => emit(other, ccs.graph()),
    }
}

pub fn parse(format: Format, text: &str) -> Result<Parsed, FormatError> {
    match format {
        Format::Json => {
            let document: GraphDocument = serde_json::from_str(text)?;
            let graph = document.to_graph()?;
            Ok(Parsed {
                graph,
                document: Some(document),
            })
        }
        Format::Edgelist => Ok(Parsed {
            graph: parse_edgelist(text)?,
            document: None,
        }),
        Format::Graph6 => Ok(Parsed {
            graph: parse_graph6(text)?,
            document: None,
        }),
        Format::Dimacs => Ok(Parsed {
            graph: parse_dimacs(text)?,
            document: None,
        }),
    }
}

/// One `u v` line per edge, 0-based, in canonical order.
pub fn to_edgelist(g: &Graph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        writeln!(out, "{} {}", e.0, e.1).unwrap();
    }
    out
}

/// Reads `u v` lines; `#` starts a comment. The vertex count is one more
/// than the largest id seen.
pub fn parse_edgelist(text: &str) -> Result<Graph, FormatError> {
    let mut edges = Vec::new();
    let mut max_id: Option<Vertex> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_id = |s: &str| {
            s.parse::<Vertex>().map_err(|e| FormatError::Parse {
                line: i + 1,
                message: format!("bad vertex id {s:?}: {e}"),
            })
        };
        let [a, b] = fields[..] else {
            return Err(FormatError::Parse {
                line: i + 1,
                message: format!("expected `u v`, got {line:?}"),
            });
        };
        let (a, b) = (parse_id(a)?, parse_id(b)?);
        max_id = max_id.max(Some(a.max(b)));
        edges.push((a, b));
    }
    let count = max_id.map_or(0, |m| m as usize + 1);
    Ok(Graph::new(count, edges)?)
}

/// DIMACS edge format with 1-based ids.
pub fn to_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        writeln!(out, "e {} {}", e.0 + 1, e.1 + 1).unwrap();
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<Graph, FormatError> {
    let mut vertex_count = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |message: String| FormatError::Parse { line: i + 1, message };
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                let [_, _, n, _] = fields[..] else {
                    return Err(err(format!("bad problem line {raw:?}")));
                };
                vertex_count = Some(n.parse::<usize>().map_err(|e| err(e.to_string()))?);
            }
            Some("e") => {
                let [_, a, b] = fields[..] else {
                    return Err(err(format!("bad edge line {raw:?}")));
                };
                let id = |s: &str| -> Result<Vertex, FormatError> {
                    match s.parse::<Vertex>() {
                        Ok(v) if v >= 1 => Ok(v - 1),
                        _ => Err(err(format!("bad vertex id {s:?}"))),
                    }
                };
                edges.push((id(a)?, id(b)?));
            }
            Some(other) => return Err(err(format!("unknown line type {other:?}"))),
        }
    }
    let n = vertex_count.ok_or(FormatError::Parse {
        line: 0,
        message: "missing `p edge` line".into(),
    })?;
    Ok(Graph::new(n, edges)?)
}

/// Standard graph6 encoding, vertices in their existing order.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push(126 as char);
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push(126 as char);
        out.push(126 as char);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
    // upper triangle, column by column: (0,1), (0,2), (1,2), (0,3), ...
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n as Vertex {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

pub fn parse_graph6(text: &str) -> Result<Graph, FormatError> {
    let line = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes: Vec<u8> = line.bytes().collect();
    if let Some(b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(FormatError::Graph6(format!("byte {b} outside 63..=126")));
    }
    let digits = |s: &[u8]| s.iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
    let (n, body) = match bytes.as_slice() {
        [] => return Err(FormatError::Graph6("empty input".into())),
        [126, 126, rest @ ..] if rest.len() >= 6 => (digits(&rest[..6]), &rest[6..]),
        [126, rest @ ..] if rest.len() >= 3 => (digits(&rest[..3]), &rest[3..]),
        [126, ..] => return Err(FormatError::Graph6("truncated size".into())),
        [first, rest @ ..] => ((*first - 63) as usize, rest),
    };
    let bit_count = n * n.saturating_sub(1) / 2;
    if body.len() != bit_count.div_ceil(6) {
        return Err(FormatError::Graph6(format!(
            "expected {} data bytes for {n} vertices, found {}",
            bit_count.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n as Vertex {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::new(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccs::generate_ccs;

    #[test]
    fn graph6_known_encodings() {
        // P3 and K4 from the format description
        assert_eq!(to_graph6(&Graph::path(3)), "Bg");
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(to_graph6(&Graph::new(0, []).unwrap()), "?");
        let big = Graph::path(63);
        assert!(to_graph6(&big).starts_with("~??~"));
        assert_eq!(parse_graph6(&to_graph6(&big)).unwrap(), big);
        assert_eq!(parse_graph6(">>graph6<<C~\n").unwrap(), Graph::complete(4));
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(parse_graph6("C").is_err());
        assert!(parse_graph6("C~~").is_err());
        assert!(parse_graph6("C\x01").is_err());
        assert!(parse_graph6("").is_err());
    }

    #[test]
    fn edgelist_parsing() {
        let g = parse_edgelist("# path\n0 1\n\n2 1 # back edge\n").unwrap();
        assert_eq!(g, Graph::path(3));
        assert!(matches!(
            parse_edgelist("0 1\n1 x\n"),
            Err(FormatError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edgelist("0 1 2\n"),
            Err(FormatError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edgelist("0 1\n1 0\n"),
            Err(FormatError::Graph(GraphError::DuplicateEdge(_)))
        ));
    }

    #[test]
    fn dimacs_parsing() {
        let text = to_dimacs(&Graph::cycle(4));
        assert_eq!(text, "p edge 4 4\ne 1 2\ne 1 4\ne 2 3\ne 3 4\n");
        assert_eq!(parse_dimacs(&format!("c comment\n{text}")).unwrap(), Graph::cycle(4));
        assert!(parse_dimacs("e 1 2\n").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 0 1\n").is_err());
    }

    #[test]
    fn ccs_json_document() {
        let ccs = generate_ccs(2).unwrap();
        let json = emit_ccs(Format::Json, &ccs);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["n"], 2);
        assert_eq!(value["vertex_count"], 72);
        assert_eq!(value["edges"].as_array().unwrap().len(), 116);
        let cubes = value["cubes"].as_array().unwrap();
        assert_eq!(cubes.iter().filter(|c| c["role"] == "outermost").count(), 8);
        assert_eq!(cubes[0]["role"], "central");
        assert_eq!(cubes[1]["bridge_edge"], serde_json::json!([0, 8]));

        let parsed = parse(Format::Json, &json).unwrap();
        assert_eq!(&parsed.graph, ccs.graph());
        assert_eq!(parsed.document.unwrap().to_json(), json);
    }

    #[test]
    fn plain_json_has_no_metadata() {
        let json = emit(Format::Json, &Graph::path(3));
        assert_eq!(json, "{\"vertex_count\":3,\"edges\":[[0,1],[1,2]]}\n");
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(Format::from_path(Path::new("a.json")), Format::Json);
        assert_eq!(Format::from_path(Path::new("a.G6")), Format::Graph6);
        assert_eq!(Format::from_path(Path::new("a.dimacs")), Format::Dimacs);
        assert_eq!(Format::from_path(Path::new("a.txt")), Format::Edgelist);
    }
}
