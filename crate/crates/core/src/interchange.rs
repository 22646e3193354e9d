//! Graph and task interchange formats.
//!
//! Graph JSON:
//!
//! ```json
//! {"nodes": [{"id": "a", "alpha": 2.0, "label": "C", "kind": "generic"}],
//!  "edges": [{"u": "a", "v": "b", "weight": 1.5}]}
//! ```
//!
//! `alpha` defaults to 1.0; an edge without `weight` derives it from the
//! endpoint alphas. The edge-list text format has one `u v` pair per line
//! (a lone id declares an isolated node; `#` starts a comment).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeWeight, GraphBuilder, Node, NodeKind, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<NodeKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<NodeDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let mut b = GraphBuilder::new();
        for n in &self.nodes {
            b.add_node(Node {
                id: n.id.clone(),
                alpha: n.alpha.unwrap_or(1.0),
                label: n.label.clone(),
                kind: n.kind.unwrap_or_default(),
            })?;
        }
        for e in &self.edges {
            let w = e.weight.map_or(EdgeWeight::Derived, EdgeWeight::Explicit);
            b.add_edge(&e.u, &e.v, w)?;
        }
        Ok(b.build())
    }

    pub fn from_graph(g: &WeightedGraph) -> Self {
        let nodes = g
            .nodes()
            .iter()
            .map(|n| NodeDoc {
                id: n.id.clone(),
                alpha: Some(n.alpha),
                label: n.label.clone(),
                kind: (n.kind != NodeKind::Generic).then_some(n.kind),
            })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                u: g.nodes()[e.u].id.clone(),
                v: g.nodes()[e.v].id.clone(),
                weight: match e.weight {
                    EdgeWeight::Derived => None,
                    EdgeWeight::Explicit(w) => Some(w),
                },
            })
            .collect();
        GraphDoc { nodes, edges }
    }
}

pub fn graph_from_json(text: &str) -> Result<WeightedGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_graph()
}

/// Pretty-printed JSON with a trailing newline.
pub fn graph_to_json(g: &WeightedGraph) -> String {
    let mut s = serde_json::to_string_pretty(&GraphDoc::from_graph(g)).expect("graph doc serializes");
    s.push('\n');
    s
}

pub fn graph_from_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut b = GraphBuilder::new();
    let mut known = std::collections::HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() > 2 {
            return Err(Error::Parse(format!(
                "line {}: expected `u v`, found {} fields",
                lineno + 1,
                tokens.len()
            )));
        }
        for t in &tokens {
            if known.insert(t.to_string()) {
                b.add_node(Node::new(*t))?;
            }
        }
        if let [u, v] = tokens[..] {
            b.add_edge(u, v, EdgeWeight::Derived)?;
        }
    }
    Ok(b.build())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskDoc {
    pub task_id: String,
    pub components: Vec<GraphDoc>,
    pub assembly: GraphDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}
