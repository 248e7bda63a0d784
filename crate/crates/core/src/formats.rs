//! File codecs: the `p`/`e` edge-list text format, the JSON interchange
//! document, and write-only DOT export.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::reduction::Role;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("header declares {declared} {what}, found {found}")]
    CountMismatch {
        declared: usize,
        found: usize,
        what: &'static str,
    },
    #[error("invalid graph: {0}")]
    Graph(#[from] crate::graph::GraphError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot infer a format from path {0:?} (expected .el, .json or .dot)")]
    UnknownExtension(String),
    #[error("DOT is export-only")]
    DotIsWriteOnly,
}

/// Supported on-disk graph formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Json,
    Dot,
}

impl Format {
    pub fn infer(path: &Path) -> Result<Format, FormatError> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("el") | Some("edgelist") | Some("txt") => Ok(Format::EdgeList),
            Some("json") => Ok(Format::Json),
            Some("dot") | Some("gv") => Ok(Format::Dot),
            _ => Err(FormatError::UnknownExtension(path.display().to_string())),
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" | "el" => Ok(Format::EdgeList),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

// ---- edge-list text ----------------------------------------------------------

/// Writes the `p <n> <m>` / `e <u> <v>` format. Isolated vertices are listed
/// with `v <name>` lines so the encoding is lossless.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for v in g.vertices() {
        if g.degree(v).expect("own vertex") == 0 {
            out.push_str(&format!("v {v}\n"));
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// Parses the edge-list text format. Blank lines and `#` comments are
/// skipped; the `p` header must come first and its counts must match.
pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "p" => {
                if header.is_some() {
                    return Err(FormatError::Malformed {
                        line,
                        message: "duplicate header".into(),
                    });
                }
                if tokens.len() != 3 {
                    return Err(FormatError::Malformed {
                        line,
                        message: format!("header needs `p <n> <m>`, got {trimmed:?}"),
                    });
                }
                let n = tokens[1].parse().map_err(|_| FormatError::Malformed {
                    line,
                    message: format!("bad vertex count {:?}", tokens[1]),
                })?;
                let m = tokens[2].parse().map_err(|_| FormatError::Malformed {
                    line,
                    message: format!("bad edge count {:?}", tokens[2]),
                })?;
                header = Some((n, m));
            }
            "v" => {
                if header.is_none() {
                    return Err(FormatError::Malformed {
                        line,
                        message: "vertex line before header".into(),
                    });
                }
                if tokens.len() != 2 {
                    return Err(FormatError::Malformed {
                        line,
                        message: "vertex line needs `v <name>`".into(),
                    });
                }
                vertices.push(tokens[1].to_string());
            }
            "e" => {
                if header.is_none() {
                    return Err(FormatError::Malformed {
                        line,
                        message: "edge line before header".into(),
                    });
                }
                if tokens.len() != 3 {
                    return Err(FormatError::Malformed {
                        line,
                        message: "edge line needs `e <u> <v>`".into(),
                    });
                }
                vertices.push(tokens[1].to_string());
                vertices.push(tokens[2].to_string());
                edges.push((tokens[1].to_string(), tokens[2].to_string()));
            }
            other => {
                return Err(FormatError::Malformed {
                    line,
                    message: format!("unknown directive {other:?}"),
                });
            }
        }
    }
    let (n, m) = header.ok_or(FormatError::Malformed {
        line: 1,
        message: "missing `p <n> <m>` header".into(),
    })?;
    let g = Graph::new(vertices, edges)?;
    if g.vertex_count() != n {
        return Err(FormatError::CountMismatch {
            declared: n,
            found: g.vertex_count(),
            what: "vertices",
        });
    }
    if g.edge_count() != m {
        return Err(FormatError::CountMismatch {
            declared: m,
            found: g.edge_count(),
            what: "edges",
        });
    }
    Ok(g)
}

// ---- JSON document ------------------------------------------------------------

/// The structured interchange document: explicit vertex list, edge list, and
/// optional per-vertex role labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, Role>>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> GraphDocument {
        GraphDocument {
            vertices: g.vertices().map(str::to_string).collect(),
            edges: g.edges(),
            labels: None,
        }
    }

    pub fn from_labeled(g: &Graph, labels: &BTreeMap<String, Role>) -> GraphDocument {
        GraphDocument {
            labels: Some(labels.clone()),
            ..GraphDocument::from_graph(g)
        }
    }

    pub fn to_graph(&self) -> Result<Graph, FormatError> {
        Ok(Graph::new(self.vertices.clone(), self.edges.clone())?)
    }
}

pub fn write_graph_json(g: &Graph, labels: Option<&BTreeMap<String, Role>>) -> String {
    let doc = match labels {
        Some(l) => GraphDocument::from_labeled(g, l),
        None => GraphDocument::from_graph(g),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn parse_graph_json(text: &str) -> Result<(Graph, Option<BTreeMap<String, Role>>), FormatError> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    Ok((doc.to_graph()?, doc.labels))
}

// ---- DOT export ----------------------------------------------------------------

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

fn role_color(role: &Role) -> &'static str {
    match role {
        Role::Block { .. } => "lightblue",
        Role::ClauseY { .. } => "gold",
        Role::LinkV { .. } => "palegreen",
        Role::LinkW { .. } => "salmon",
    }
}

/// Write-only DOT rendering; labeled vertices are colored by role class.
pub fn write_dot(g: &Graph, labels: Option<&BTreeMap<String, Role>>) -> String {
    let mut out = String::from("graph g {\n");
    for v in g.vertices() {
        match labels.and_then(|l| l.get(v)) {
            Some(role) => out.push_str(&format!(
                "  {} [style=filled, fillcolor={}];\n",
                quote(v),
                role_color(role)
            )),
            None => out.push_str(&format!("  {};\n", quote(v))),
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  {} -- {};\n", quote(&u), quote(&v)));
    }
    out.push_str("}\n");
    out
}
