//! The JSON diagram file format.
//!
//! ```json
//! {
//!   "edges": [{"id": 1, "color": "i", "tail": [1, 0], "head": [2, 0], "twists": ["+"]}],
//!   "vertices": [{"id": 1, "rotation": ["1+", "2+", "3-"]}],
//!   "crossings": [{"id": 3, "sign": "+", "rotation": ["4-", "5-", "6+", "7+"], "over": 4}],
//!   "outer": "1+",
//!   "delta": {"edge": 1, "position": 0}
//! }
//! ```
//!
//! A half-edge ref `e+` is the tail end of edge `e`, `e-` its head end.
//! `tail` and `head` are `[node id, port]` with the port indexing the node's
//! rotation. `over` is the id of the edge entering the crossing on the over
//! strand. `outer` is one ref or one ref per connected component. A closed
//! loop without nodes has `null` endpoints.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Bindings, ColorError, ColorExpr};
use crate::diagram::{Basepoint, Dart, Diagram, End, Node, NodeKind, Sign, ValidationReport};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error("invalid diagram: {0}")]
    Validation(ValidationReport),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> FileError {
    FileError::Field { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColorSpec {
    Int(u32),
    Expr(String),
}

impl ColorSpec {
    pub fn expr(&self) -> Result<ColorExpr, ColorError> {
        match self {
            ColorSpec::Int(c) => Ok(ColorExpr::constant(*c as i64)),
            ColorSpec::Expr(s) => s.parse(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: u32,
    pub color: ColorSpec,
    pub tail: Option<(u32, usize)>,
    pub head: Option<(u32, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twists: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: u32,
    pub rotation: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingRecord {
    pub id: u32,
    pub sign: String,
    pub rotation: Vec<String>,
    pub over: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OuterSpec {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaRecord {
    pub edge: u32,
    #[serde(default)]
    pub position: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub vertices: Vec<VertexRecord>,
    #[serde(default)]
    pub crossings: Vec<CrossingRecord>,
    pub outer: OuterSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaRecord>,
}

pub fn parse_dart_ref(s: &str, edges: &HashMap<u32, usize>) -> Option<Dart> {
    let (num, end) = match s.trim().strip_suffix('+') {
        Some(n) => (n, End::Tail),
        None => (s.trim().strip_suffix('-')?, End::Head),
    };
    let id: u32 = num.parse().ok()?;
    Some(Dart { edge: *edges.get(&id)?, end })
}

pub fn dart_ref(d: &Diagram, x: Dart) -> String {
    let s = if x.end == End::Tail { "+" } else { "-" };
    format!("{}{}", d.edges[x.edge].id, s)
}

fn parse_sign(s: &str) -> Option<Sign> {
    match s {
        "+" | "positive" => Some(Sign::Pos),
        "-" | "negative" => Some(Sign::Neg),
        _ => None,
    }
}

impl DiagramFile {
    pub fn from_json(text: &str) -> Result<DiagramFile, FileError> {
        serde_json::from_str(text).map_err(|e| FileError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram file serializes")
    }

    /// Color variables used anywhere in the file.
    pub fn variables(&self) -> Result<BTreeSet<String>, ColorError> {
        let mut out = BTreeSet::new();
        for e in &self.edges {
            out.extend(e.color.expr()?.variables().map(String::from));
        }
        Ok(out)
    }

    pub fn is_symbolic(&self) -> bool {
        self.variables().map(|v| !v.is_empty()).unwrap_or(true)
    }

    /// Bind colors and build the diagram, validating it.
    pub fn to_diagram(&self, bindings: &Bindings) -> Result<Diagram, FileError> {
        let d = self.to_diagram_unchecked(bindings)?;
        let rep = d.validate();
        if !rep.is_valid() {
            return Err(FileError::Validation(rep));
        }
        Ok(d)
    }

    /// Bind colors and build the diagram without the structural validation.
    pub fn to_diagram_unchecked(&self, bindings: &Bindings) -> Result<Diagram, FileError> {
        let mut edge_ix = HashMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            if edge_ix.insert(e.id, k).is_some() {
                return Err(field_err(format!("edges[{k}].id"), format!("duplicate edge id {}", e.id)));
            }
        }
        let mut node_ix = HashMap::new();
        let ids = self.vertices.iter().map(|v| v.id).chain(self.crossings.iter().map(|c| c.id));
        for (k, id) in ids.enumerate() {
            if node_ix.insert(id, k).is_some() {
                return Err(field_err("vertices/crossings", format!("duplicate node id {id}")));
            }
        }
        let dart = |s: &str, field: String| {
            parse_dart_ref(s, &edge_ix).ok_or_else(|| field_err(field, format!("bad half-edge ref `{s}`")))
        };

        let mut nodes = Vec::new();
        for (k, v) in self.vertices.iter().enumerate() {
            let rotation = v
                .rotation
                .iter()
                .enumerate()
                .map(|(p, s)| dart(s, format!("vertices[{k}].rotation[{p}]")))
                .collect::<Result<Vec<_>, _>>()?;
            nodes.push(Node { id: v.id, kind: NodeKind::Vertex, rotation });
        }
        for (k, c) in self.crossings.iter().enumerate() {
            let rotation = c
                .rotation
                .iter()
                .enumerate()
                .map(|(p, s)| dart(s, format!("crossings[{k}].rotation[{p}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let sign =
                parse_sign(&c.sign).ok_or_else(|| field_err(format!("crossings[{k}].sign"), "expected `+` or `-`"))?;
            let over = *edge_ix
                .get(&c.over)
                .ok_or_else(|| field_err(format!("crossings[{k}].over"), format!("unknown edge {}", c.over)))?;
            nodes.push(Node { id: c.id, kind: NodeKind::Crossing { sign, over }, rotation });
        }

        let mut edges = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            let color = e.color.expr()?.bind(bindings)?;
            let mut ends = [None, None];
            for (slot, (end, name)) in [(e.tail, "tail"), (e.head, "head")].into_iter().enumerate() {
                let Some((nid, port)) = end else { continue };
                let n = *node_ix
                    .get(&nid)
                    .ok_or_else(|| field_err(format!("edges[{k}].{name}"), format!("unknown node {nid}")))?;
                let want = if slot == 0 { Dart::tail(k) } else { Dart::head(k) };
                if nodes[n].rotation.get(port) != Some(&want) {
                    return Err(field_err(
                        format!("edges[{k}].{name}"),
                        format!("port {port} of node {nid} does not hold this half-edge"),
                    ));
                }
                ends[slot] = Some(n);
            }
            let twists = e
                .twists
                .iter()
                .enumerate()
                .map(|(p, s)| {
                    parse_sign(s).ok_or_else(|| field_err(format!("edges[{k}].twists[{p}]"), "expected `+` or `-`"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            edges.push(crate::diagram::Edge { id: e.id, color, tail: ends[0], head: ends[1], twists });
        }

        let outer_refs = match &self.outer {
            OuterSpec::One(s) => vec![s.clone()],
            OuterSpec::Many(v) => v.clone(),
        };
        let outer = outer_refs
            .iter()
            .enumerate()
            .map(|(p, s)| dart(s, format!("outer[{p}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let delta = match self.delta {
            None => None,
            Some(r) => Some(Basepoint {
                edge: *edge_ix
                    .get(&r.edge)
                    .ok_or_else(|| field_err("delta.edge", format!("unknown edge {}", r.edge)))?,
                position: r.position,
            }),
        };
        Ok(Diagram { edges, nodes, outer, delta })
    }

    /// The file for a diagram with integer colors.
    pub fn from_diagram(d: &Diagram) -> DiagramFile {
        let pos = d.dart_positions();
        let end = |x: Dart| pos[x.slot()].map(|(n, p)| (d.nodes[n].id, p));
        let edges = d
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| EdgeRecord {
                id: e.id,
                color: ColorSpec::Int(e.color),
                tail: end(Dart::tail(k)),
                head: end(Dart::head(k)),
                twists: e.twists.iter().map(|s| s.symbol().to_string()).collect(),
            })
            .collect();
        let refs = |n: &Node| n.rotation.iter().map(|&x| dart_ref(d, x)).collect::<Vec<_>>();
        let vertices =
            d.nodes.iter().filter(|n| n.is_vertex()).map(|n| VertexRecord { id: n.id, rotation: refs(n) }).collect();
        let crossings = d
            .nodes
            .iter()
            .filter_map(|n| match n.kind {
                NodeKind::Crossing { sign, over } => Some(CrossingRecord {
                    id: n.id,
                    sign: sign.symbol().to_string(),
                    rotation: refs(n),
                    over: d.edges[over].id,
                }),
                NodeKind::Vertex => None,
            })
            .collect();
        let outer = if d.outer.len() == 1 {
            OuterSpec::One(dart_ref(d, d.outer[0]))
        } else {
            OuterSpec::Many(d.outer.iter().map(|&x| dart_ref(d, x)).collect())
        };
        let delta = d.delta.map(|b| DeltaRecord { edge: d.edges[b.edge].id, position: b.position });
        DiagramFile { edges, vertices, crossings, outer, delta }
    }
}

/// Parse and validate a file with integer colors (or bound variables).
pub fn parse(text: &str, bindings: &Bindings) -> Result<Diagram, FileError> {
    DiagramFile::from_json(text)?.to_diagram(bindings)
}

pub fn to_json(d: &Diagram) -> String {
    DiagramFile::from_diagram(d).to_json()
}
