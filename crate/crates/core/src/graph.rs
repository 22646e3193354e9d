//! Weighted undirected simple graphs.
//!
//! Every node carries a component complexity `alpha > 0`. Edges either derive
//! their weight from the endpoints as `sqrt(alpha_u * alpha_v)` or carry an
//! explicit positive weight. Graphs are immutable once built.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    #[default]
    Generic,
    Requirement,
    Entity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub alpha: f64,
    pub label: Option<String>,
    pub kind: NodeKind,
}

impl Node {
    /// A generic node with `alpha = 1.0`.
    pub fn new(id: impl Into<String>) -> Self {
        Node {
            id: id.into(),
            alpha: 1.0,
            label: None,
            kind: NodeKind::Generic,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_kind(mut self, kind: NodeKind) -> Self {
        self.kind = kind;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeWeight {
    /// `sqrt(alpha_u * alpha_v)`.
    Derived,
    Explicit(f64),
}

/// An undirected edge between two node indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: EdgeWeight,
}

#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    pairs: HashSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: Node) -> Result<usize> {
        if !(node.alpha > 0.0) || !node.alpha.is_finite() {
            return Err(Error::NonPositiveAlpha {
                id: node.id,
                alpha: node.alpha,
            });
        }
        if self.index.contains_key(&node.id) {
            return Err(Error::DuplicateNode(node.id));
        }
        let idx = self.nodes.len();
        self.index.insert(node.id.clone(), idx);
        self.nodes.push(node);
        Ok(idx)
    }

    pub fn add_edge(&mut self, u: &str, v: &str, weight: EdgeWeight) -> Result<()> {
        let ui = *self
            .index
            .get(u)
            .ok_or_else(|| Error::UnknownNode(u.to_string()))?;
        let vi = *self
            .index
            .get(v)
            .ok_or_else(|| Error::UnknownNode(v.to_string()))?;
        self.add_edge_by_index(ui, vi, weight)
    }

    pub fn add_edge_by_index(&mut self, u: usize, v: usize, weight: EdgeWeight) -> Result<()> {
        for i in [u, v] {
            if i >= self.nodes.len() {
                return Err(Error::UnknownNode(format!("#{i}")));
            }
        }
        if u == v {
            return Err(Error::SelfLoop(self.nodes[u].id.clone()));
        }
        if let EdgeWeight::Explicit(w) = weight {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight {
                    u: self.nodes[u].id.clone(),
                    v: self.nodes[v].id.clone(),
                    weight: w,
                });
            }
        }
        if !self.pairs.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge(
                self.nodes[u].id.clone(),
                self.nodes[v].id.clone(),
            ));
        }
        self.edges.push(Edge { u, v, weight });
        Ok(())
    }

    pub fn build(self) -> WeightedGraph {
        WeightedGraph {
            nodes: self.nodes,
            edges: self.edges,
            index: self.index,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl WeightedGraph {
    pub fn empty() -> Self {
        GraphBuilder::new().build()
    }

    /// Unit-alpha graph on nodes `"0".."n-1"` with derived edge weights.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for i in 0..n {
            b.add_node(Node::new(i.to_string()))?;
        }
        for &(u, v) in edges {
            b.add_edge_by_index(u, v, EdgeWeight::Derived)?;
        }
        Ok(b.build())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    /// Effective interface weight of an edge.
    pub fn edge_weight(&self, e: &Edge) -> f64 {
        match e.weight {
            EdgeWeight::Derived => (self.nodes[e.u].alpha * self.nodes[e.v].alpha).sqrt(),
            EdgeWeight::Explicit(w) => w,
        }
    }

    /// Unweighted adjacency lists, indexed like `nodes()`.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    fn component_labels(&self) -> (Vec<usize>, usize) {
        let adj = self.neighbors();
        let mut label = vec![usize::MAX; self.nodes.len()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.nodes.len() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Partition of node ids into connected components, ordered by the
    /// position of each component's first node.
    pub fn connected_components(&self) -> Vec<Vec<String>> {
        let (label, count) = self.component_labels();
        let mut parts = vec![Vec::new(); count];
        for (i, &c) in label.iter().enumerate() {
            parts[c].push(self.nodes[i].id.clone());
        }
        parts
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Dimension of the cycle space, `e - n + p`.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + self.component_count() - self.node_count()
    }

    /// Largest hop-count eccentricity over all components.
    pub fn diameter(&self) -> usize {
        let adj = self.neighbors();
        let n = self.nodes.len();
        let mut best = 0;
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                best = best.max(dist[x]);
                for &y in &adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        best
    }

    /// Subgraph induced by `ids`, keeping node and edge attributes.
    pub fn induced_subgraph<S: AsRef<str>>(&self, ids: &[S]) -> Result<WeightedGraph> {
        let mut b = GraphBuilder::new();
        let mut keep = vec![false; self.nodes.len()];
        for id in ids {
            let i = self
                .index_of(id.as_ref())
                .ok_or_else(|| Error::UnknownNode(id.as_ref().to_string()))?;
            keep[i] = true;
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if keep[i] {
                remap[i] = b.add_node(node.clone())?;
            }
        }
        for e in &self.edges {
            if keep[e.u] && keep[e.v] {
                b.add_edge_by_index(remap[e.u], remap[e.v], e.weight)?;
            }
        }
        Ok(b.build())
    }

    /// Disjoint union; ids of `other` are prefixed to keep them unique.
    pub fn disjoint_union(&self, other: &WeightedGraph, prefix: &str) -> Result<WeightedGraph> {
        let mut b = GraphBuilder::new();
        for node in &self.nodes {
            b.add_node(node.clone())?;
        }
        let offset = self.nodes.len();
        for node in &other.nodes {
            let mut n = node.clone();
            n.id = format!("{prefix}{}", node.id);
            b.add_node(n)?;
        }
        for e in &self.edges {
            b.add_edge_by_index(e.u, e.v, e.weight)?;
        }
        for e in &other.edges {
            b.add_edge_by_index(e.u + offset, e.v + offset, e.weight)?;
        }
        Ok(b.build())
    }

    /// Copy of the graph with `k` extra isolated unit-alpha nodes.
    pub fn with_isolated_nodes(&self, k: usize) -> Result<WeightedGraph> {
        let mut extra = GraphBuilder::new();
        for i in 0..k {
            extra.add_node(Node::new(format!("isolated-{i}")))?;
        }
        self.disjoint_union(&extra.build(), "")
    }

    /// Copy with every alpha multiplied by `c`.
    pub fn scale_alpha(&self, c: f64) -> Result<WeightedGraph> {
        let mut b = GraphBuilder::new();
        for node in &self.nodes {
            b.add_node(node.clone().with_alpha(node.alpha * c))?;
        }
        for e in &self.edges {
            let w = match e.weight {
                EdgeWeight::Explicit(w) => EdgeWeight::Explicit(w * c),
                d => d,
            };
            b.add_edge_by_index(e.u, e.v, w)?;
        }
        Ok(b.build())
    }

    /// Reorders nodes so that new position `i` holds old node `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<WeightedGraph> {
        if order.len() != self.nodes.len() {
            return Err(Error::usage("permutation length does not match node count"));
        }
        let mut inverse = vec![usize::MAX; order.len()];
        for (new, &old) in order.iter().enumerate() {
            if old >= order.len() || inverse[old] != usize::MAX {
                return Err(Error::usage("not a permutation"));
            }
            inverse[old] = new;
        }
        let mut b = GraphBuilder::new();
        for &old in order {
            b.add_node(self.nodes[old].clone())?;
        }
        for e in &self.edges {
            b.add_edge_by_index(inverse[e.u], inverse[e.v], e.weight)?;
        }
        Ok(b.build())
    }
}

/// Standard graph families used throughout tests and examples.
pub mod families {
    use super::WeightedGraph;

    pub fn complete(n: usize) -> WeightedGraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        WeightedGraph::from_edges(n, &edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> WeightedGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        WeightedGraph::from_edges(n, &edges).expect("path is simple")
    }

    pub fn cycle(n: usize) -> WeightedGraph {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        WeightedGraph::from_edges(n, &edges).expect("cycle is simple")
    }

    /// `K_{1,k}`: hub `0` joined to `k` leaves.
    pub fn star(k: usize) -> WeightedGraph {
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        WeightedGraph::from_edges(k + 1, &edges).expect("star is simple")
    }

    pub fn edgeless(n: usize) -> WeightedGraph {
        WeightedGraph::from_edges(n, &[]).expect("edgeless graph is simple")
    }
}
