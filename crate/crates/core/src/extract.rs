//! Rule-based extraction of a three-layer requirements network.
//!
//! A requirement starts at the beginning of a line with a dotted-decimal id
//! (`1`, `1.2`, `3.1.4`) followed by whitespace. Indented or non-numbered
//! lines continue the current requirement; lines before the first
//! requirement are ignored. From each requirement the extractor derives
//!
//! * a hierarchy edge to its nearest existing ancestor id,
//! * reference edges from cross-reference phrases (`see 1.2`, `REQ-1.2`, ...),
//! * entity-mention edges to lexicon terms found as whole words.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use regex::Regex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeWeight, GraphBuilder, Node, NodeKind, WeightedGraph};
use crate::task::IntegrationTask;

/// Default cross-reference patterns. Each has one capture group holding the id.
pub const DEFAULT_REF_PATTERNS: [&str; 2] = [
    r"(?i)\b(?:see|per|ref\.?|as defined in)\s+(\d+(?:\.\d+)*)",
    r"(?i)\bREQ-(\d+(?:\.\d+)*)",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RequirementRecord {
    pub id: String,
    pub text: String,
    pub parent_id: Option<String>,
    pub refs: Vec<String>,
    pub entities: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnresolvedRef {
    pub from: String,
    pub target: String,
}

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    lexicon: Vec<(String, Regex)>,
    ref_patterns: Vec<Regex>,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            lexicon: Vec::new(),
            ref_patterns: DEFAULT_REF_PATTERNS
                .iter()
                .map(|p| Regex::new(p).expect("default pattern compiles"))
                .collect(),
        }
    }
}

impl ExtractOptions {
    /// Entity terms are matched case-insensitively as whole words; duplicate
    /// terms (ignoring case) keep their first spelling.
    pub fn with_lexicon<S: AsRef<str>>(mut self, terms: &[S]) -> Self {
        let mut seen = HashSet::new();
        self.lexicon = terms
            .iter()
            .map(|t| t.as_ref().trim())
            .filter(|t| !t.is_empty() && seen.insert(t.to_lowercase()))
            .map(|t| {
                let body = t
                    .split_whitespace()
                    .map(regex::escape)
                    .collect::<Vec<_>>()
                    .join(r"\s+");
                let re = Regex::new(&format!(r"(?i)\b{body}\b")).expect("escaped term compiles");
                (t.to_string(), re)
            })
            .collect();
        self
    }

    /// Replaces the reference patterns. Each must contain a capture group; the
    /// group named `id`, or else the first group, yields the referenced id.
    pub fn with_ref_patterns<S: AsRef<str>>(mut self, patterns: &[S]) -> Result<Self> {
        self.ref_patterns = patterns
            .iter()
            .map(|p| {
                let p = p.as_ref();
                let re = Regex::new(p).map_err(|e| Error::BadPattern {
                    pattern: p.to_string(),
                    reason: e.to_string(),
                })?;
                if re.captures_len() < 2 {
                    return Err(Error::BadPattern {
                        pattern: p.to_string(),
                        reason: "no capture group for the referenced id".into(),
                    });
                }
                Ok(re)
            })
            .collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn lexicon_terms(&self) -> impl Iterator<Item = &str> {
        self.lexicon.iter().map(|(t, _)| t.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extraction {
    pub records: Vec<RequirementRecord>,
    pub unresolved: Vec<UnresolvedRef>,
    pub preamble_lines: usize,
}

fn is_valid_id(s: &str) -> bool {
    !s.is_empty()
        && s.split('.')
            .all(|seg| !seg.is_empty() && seg.bytes().all(|b| b.is_ascii_digit()))
}

fn parent_of(id: &str) -> Option<&str> {
    id.rfind('.').map(|i| &id[..i])
}

/// Splits the document into `(line, id, text)` requirement chunks.
fn split_requirements(doc: &str) -> Result<(Vec<(usize, String, String)>, usize)> {
    let mut chunks: Vec<(usize, String, String)> = Vec::new();
    let mut preamble = 0;
    for (i, line) in doc.lines().enumerate() {
        let starts_numbered = line.as_bytes().first().is_some_and(u8::is_ascii_digit);
        if starts_numbered {
            let token = line.split_whitespace().next().unwrap_or("");
            if token.bytes().all(|b| b.is_ascii_digit() || b == b'.') {
                let id = token.strip_suffix('.').unwrap_or(token);
                if !is_valid_id(id) {
                    return Err(Error::MalformedId {
                        line: i + 1,
                        token: token.to_string(),
                    });
                }
                let text = line[token.len()..].trim().to_string();
                chunks.push((i + 1, id.to_string(), text));
                continue;
            }
        }
        match chunks.last_mut() {
            Some((_, _, text)) => {
                let extra = line.trim();
                if !extra.is_empty() {
                    if !text.is_empty() {
                        text.push(' ');
                    }
                    text.push_str(extra);
                }
            }
            None => {
                if !line.trim().is_empty() {
                    preamble += 1;
                }
            }
        }
    }
    Ok((chunks, preamble))
}

pub fn parse_requirements(doc: &str, opts: &ExtractOptions) -> Result<Extraction> {
    let (chunks, preamble_lines) = split_requirements(doc)?;

    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, id, _) in &chunks {
        *counts.entry(id.as_str()).or_default() += 1;
    }
    let dups: Vec<String> = counts
        .iter()
        .filter(|(_, &c)| c > 1)
        .map(|(id, _)| id.to_string())
        .collect();
    if !dups.is_empty() {
        return Err(Error::DuplicateRequirements(dups));
    }
    let known: HashSet<&str> = chunks.iter().map(|(_, id, _)| id.as_str()).collect();

    let mut unresolved = Vec::new();
    let mut records = Vec::with_capacity(chunks.len());
    for (_, id, text) in &chunks {
        let mut refs: Vec<String> = Vec::new();
        for re in &opts.ref_patterns {
            for caps in re.captures_iter(text) {
                let Some(target) = caps.name("id").or_else(|| caps.get(1)) else {
                    continue;
                };
                let target = target.as_str().to_string();
                if target == *id || refs.contains(&target) {
                    continue;
                }
                if known.contains(target.as_str()) {
                    refs.push(target);
                } else if !unresolved
                    .iter()
                    .any(|u: &UnresolvedRef| u.from == *id && u.target == target)
                {
                    unresolved.push(UnresolvedRef {
                        from: id.clone(),
                        target,
                    });
                }
            }
        }
        let entities = opts
            .lexicon
            .iter()
            .filter(|(_, re)| re.is_match(text))
            .map(|(t, _)| t.clone())
            .collect();
        records.push(RequirementRecord {
            id: id.clone(),
            text: text.clone(),
            parent_id: parent_of(id).map(str::to_string),
            refs,
            entities,
        });
    }
    Ok(Extraction {
        records,
        unresolved,
        preamble_lines,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Hierarchy,
    Reference,
    EntityMention,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Hierarchy, Layer::Reference, Layer::EntityMention];

    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Hierarchy => "hierarchy",
            Layer::Reference => "reference",
            Layer::EntityMention => "entity_mention",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Layer::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| {
                Error::usage(format!(
                    "unknown layer `{s}` (valid: hierarchy, reference, entity_mention)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayerNode {
    Requirement(usize),
    Entity(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayeredEdge {
    pub a: LayerNode,
    pub b: LayerNode,
    pub layer: Layer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerWeights {
    pub hierarchy: f64,
    pub reference: f64,
    pub entity_mention: f64,
}

impl Default for LayerWeights {
    fn default() -> Self {
        LayerWeights {
            hierarchy: 1.0,
            reference: 1.0,
            entity_mention: 1.0,
        }
    }
}

impl LayerWeights {
    pub fn get(&self, layer: Layer) -> f64 {
        match layer {
            Layer::Hierarchy => self.hierarchy,
            Layer::Reference => self.reference,
            Layer::EntityMention => self.entity_mention,
        }
    }
}

/// Requirement and entity nodes joined by typed, undirected edges.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredRequirementGraph {
    pub requirements: Vec<String>,
    pub entities: Vec<String>,
    pub edges: Vec<LayeredEdge>,
    pub weights: LayerWeights,
}

impl LayeredRequirementGraph {
    pub fn edge_count(&self, layer: Layer) -> usize {
        self.edges.iter().filter(|e| e.layer == layer).count()
    }

    /// Hierarchy parent (nearest existing ancestor) of each requirement.
    pub fn hierarchy_parent(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.requirements.len()];
        for e in self.edges.iter().filter(|e| e.layer == Layer::Hierarchy) {
            if let (LayerNode::Requirement(p), LayerNode::Requirement(c)) = (e.a, e.b) {
                parent[c] = Some(p);
            }
        }
        parent
    }
}

pub fn build_layered_graph(records: &[RequirementRecord]) -> LayeredRequirementGraph {
    build_layered_graph_with(records, LayerWeights::default())
}

pub fn build_layered_graph_with(
    records: &[RequirementRecord],
    weights: LayerWeights,
) -> LayeredRequirementGraph {
    let index: HashMap<&str, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id.as_str(), i))
        .collect();
    let mut edges = Vec::new();

    for (i, r) in records.iter().enumerate() {
        let mut ancestor = parent_of(&r.id);
        while let Some(a) = ancestor {
            if let Some(&p) = index.get(a) {
                edges.push(LayeredEdge {
                    a: LayerNode::Requirement(p),
                    b: LayerNode::Requirement(i),
                    layer: Layer::Hierarchy,
                });
                break;
            }
            ancestor = parent_of(a);
        }
    }

    let mut ref_pairs = BTreeSet::new();
    for (i, r) in records.iter().enumerate() {
        for target in &r.refs {
            let Some(&j) = index.get(target.as_str()) else {
                continue;
            };
            if i != j && ref_pairs.insert((i.min(j), i.max(j))) {
                edges.push(LayeredEdge {
                    a: LayerNode::Requirement(i),
                    b: LayerNode::Requirement(j),
                    layer: Layer::Reference,
                });
            }
        }
    }

    let mut entities: Vec<String> = Vec::new();
    let mut entity_index: HashMap<String, usize> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        let mut mentioned = HashSet::new();
        for name in &r.entities {
            let key = name.to_lowercase();
            let k = *entity_index.entry(key.clone()).or_insert_with(|| {
                entities.push(name.clone());
                entities.len() - 1
            });
            if mentioned.insert(k) {
                edges.push(LayeredEdge {
                    a: LayerNode::Requirement(i),
                    b: LayerNode::Entity(k),
                    layer: Layer::EntityMention,
                });
            }
        }
    }

    LayeredRequirementGraph {
        requirements: records.iter().map(|r| r.id.clone()).collect(),
        entities,
        edges,
        weights,
    }
}

pub const ENTITY_ID_PREFIX: &str = "entity:";

/// Flattens selected layers into a [`WeightedGraph`].
///
/// Parallel edges from different layers merge into one edge whose weight is
/// the sum of the layer weights. With `collapse_entities` every entity is
/// replaced by a clique over the requirements that mention it.
pub fn project(
    layered: &LayeredRequirementGraph,
    layers: &[Layer],
    collapse_entities: bool,
    alpha_table: &BTreeMap<String, f64>,
) -> Result<WeightedGraph> {
    if layers.is_empty() {
        return Err(Error::usage("projection needs at least one layer"));
    }
    if let Some((label, &alpha)) = alpha_table.iter().find(|(_, &a)| !(a > 0.0)) {
        return Err(Error::NonPositiveAlpha {
            id: label.clone(),
            alpha,
        });
    }
    let selected: HashSet<Layer> = layers.iter().copied().collect();
    let keep_entities = selected.contains(&Layer::EntityMention) && !collapse_entities;

    let mut b = GraphBuilder::new();
    let alpha_for = |label: &str| alpha_table.get(label).copied().unwrap_or(1.0);
    for id in &layered.requirements {
        b.add_node(
            Node::new(id.clone())
                .with_alpha(alpha_for(id))
                .with_label(id.clone())
                .with_kind(NodeKind::Requirement),
        )?;
    }
    let req_count = layered.requirements.len();
    if keep_entities {
        for name in &layered.entities {
            b.add_node(
                Node::new(format!("{ENTITY_ID_PREFIX}{name}"))
                    .with_alpha(alpha_for(name))
                    .with_label(name.clone())
                    .with_kind(NodeKind::Entity),
            )?;
        }
    }
    let slot = |n: LayerNode| match n {
        LayerNode::Requirement(i) => i,
        LayerNode::Entity(k) => req_count + k,
    };

    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut add = |x: usize, y: usize, w: f64| {
        *merged.entry((x.min(y), x.max(y))).or_default() += w;
    };
    let mut mentions: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &layered.edges {
        if !selected.contains(&e.layer) {
            continue;
        }
        let w = layered.weights.get(e.layer);
        match (e.layer, e.b) {
            (Layer::EntityMention, LayerNode::Entity(k)) if collapse_entities => {
                mentions.entry(k).or_default().push(slot(e.a));
            }
            _ => add(slot(e.a), slot(e.b), w),
        }
    }
    for reqs in mentions.values() {
        for (i, &x) in reqs.iter().enumerate() {
            for &y in &reqs[i + 1..] {
                add(x, y, layered.weights.entity_mention);
            }
        }
    }
    for ((x, y), w) in merged {
        b.add_edge_by_index(x, y, EdgeWeight::Explicit(w))?;
    }
    Ok(b.build())
}

/// Per-layer totals and diagnostics for one extraction run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionReport {
    pub requirements: usize,
    pub entities: usize,
    pub hierarchy_edges: usize,
    pub reference_edges: usize,
    pub entity_mention_edges: usize,
    pub projected_nodes: usize,
    pub projected_edges: usize,
    pub preamble_lines: usize,
    pub unresolved_refs: Vec<UnresolvedRef>,
}

impl ExtractionReport {
    pub fn new(ex: &Extraction, layered: &LayeredRequirementGraph, projected: &WeightedGraph) -> Self {
        ExtractionReport {
            requirements: layered.requirements.len(),
            entities: layered.entities.len(),
            hierarchy_edges: layered.edge_count(Layer::Hierarchy),
            reference_edges: layered.edge_count(Layer::Reference),
            entity_mention_edges: layered.edge_count(Layer::EntityMention),
            projected_nodes: projected.node_count(),
            projected_edges: projected.edge_count(),
            preamble_lines: ex.preamble_lines,
            unresolved_refs: ex.unresolved.clone(),
        }
    }
}

/// Treats each hierarchy tree (split further into connected pieces of the
/// projection) as a component and the whole projection as the assembly.
pub fn requirement_task(
    task_id: &str,
    layered: &LayeredRequirementGraph,
    projected: &WeightedGraph,
) -> Result<IntegrationTask> {
    let parent = layered.hierarchy_parent();
    let root_of = |mut i: usize| {
        while let Some(p) = parent[i] {
            i = p;
        }
        i
    };
    let mut trees: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for (i, id) in layered.requirements.iter().enumerate() {
        trees.entry(root_of(i)).or_default().push(id);
    }
    let mut components = Vec::new();
    for ids in trees.values() {
        let sub = projected.induced_subgraph(ids)?;
        for piece in sub.connected_components() {
            components.push(sub.induced_subgraph(&piece)?);
        }
    }
    IntegrationTask::new(task_id, components, projected.clone())
}
