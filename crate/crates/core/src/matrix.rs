//! Dense matrix representations of a [`WeightedGraph`].

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    NormalizedLaplacian,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 3] = [
        MatrixKind::Adjacency,
        MatrixKind::Laplacian,
        MatrixKind::NormalizedLaplacian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::NormalizedLaplacian => "normalized_laplacian",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MatrixKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::usage(format!("unknown matrix kind `{s}`")))
    }
}

/// A real symmetric matrix built from a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrix {
    kind: MatrixKind,
    entries: DMatrix<f64>,
}

impl SystemMatrix {
    /// Wraps an arbitrary square matrix. Symmetry is checked later by the
    /// eigensolver.
    pub fn from_entries(kind: MatrixKind, entries: DMatrix<f64>) -> Self {
        SystemMatrix { kind, entries }
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }
}

/// Builds the requested matrix.
///
/// * adjacency: effective edge weights off the diagonal, `alpha_i` on it.
/// * laplacian: `S - W + diag(alpha)` with `S` the weighted degrees.
/// * normalized_laplacian: `S^-1/2 (S - W) S^-1/2`; isolated nodes give zero rows.
///
/// With `topology_only` every weight is 1 and the alpha diagonal is dropped,
/// which yields the classical `A`, `D - A` and normalized Laplacian.
pub fn build_matrix(g: &WeightedGraph, kind: MatrixKind, topology_only: bool) -> SystemMatrix {
    let n = g.node_count();
    let mut w = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        let weight = if topology_only { 1.0 } else { g.edge_weight(e) };
        w[(e.u, e.v)] = weight;
        w[(e.v, e.u)] = weight;
    }
    let alpha_diag = |m: &mut DMatrix<f64>| {
        if !topology_only {
            for (i, node) in g.nodes().iter().enumerate() {
                m[(i, i)] += node.alpha;
            }
        }
    };
    let strength: Vec<f64> = (0..n).map(|i| w.row(i).sum()).collect();

    let entries = match kind {
        MatrixKind::Adjacency => {
            let mut m = w;
            alpha_diag(&mut m);
            m
        }
        MatrixKind::Laplacian => {
            let mut m = -w;
            for (i, s) in strength.iter().enumerate() {
                m[(i, i)] = *s;
            }
            alpha_diag(&mut m);
            m
        }
        MatrixKind::NormalizedLaplacian => {
            let inv_sqrt: Vec<f64> = strength
                .iter()
                .map(|&s| if s > 0.0 { 1.0 / s.sqrt() } else { 0.0 })
                .collect();
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                if strength[i] > 0.0 {
                    m[(i, i)] = 1.0;
                }
            }
            for e in g.edges() {
                let (i, j) = (e.u, e.v);
                let v = -w[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
            m
        }
    };
    SystemMatrix { kind, entries }
}
