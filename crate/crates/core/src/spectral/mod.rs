//! Symmetric eigendecomposition and the generalized spectral metric family.

mod metric;

pub use metric::{
    all_named_metrics, evaluate_metric, evaluate_on_spectrum, named_metric, Aggregation, Gamma,
    MetricName, MetricSpec,
};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::{MatrixKind, SystemMatrix};

/// Eigenvalues of a [`SystemMatrix`], sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub source_kind: MatrixKind,
    /// `tr(M) / n`, or 0 for the empty matrix.
    pub trace_over_n: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Threshold below which an eigenvalue counts as zero: `1e-9 * max(1, ||M||_inf)`.
pub fn zero_tolerance(m: &SystemMatrix) -> f64 {
    let norm_inf = m
        .entries()
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    1e-9 * norm_inf.max(1.0)
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSymmetric {
            row: m.nrows(),
            col: m.ncols(),
        });
    }
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if m[(i, j)] != m[(j, i)] {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Eigenvalues and eigenvectors (as columns, in the same ascending order).
pub fn eigendecompose_with_vectors(m: &SystemMatrix) -> Result<(Spectrum, DMatrix<f64>)> {
    let entries = m.entries();
    check_symmetric(entries)?;
    let n = entries.nrows();
    if n == 0 {
        let spectrum = Spectrum {
            eigenvalues: Vec::new(),
            source_kind: m.kind(),
            trace_over_n: 0.0,
        };
        return Ok((spectrum, DMatrix::zeros(0, 0)));
    }
    let eig = SymmetricEigen::new(entries.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let spectrum = Spectrum {
        eigenvalues,
        source_kind: m.kind(),
        trace_over_n: m.trace() / n as f64,
    };
    Ok((spectrum, vectors))
}

pub fn eigendecompose(m: &SystemMatrix) -> Result<Spectrum> {
    eigendecompose_with_vectors(m).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::WeightedGraph;
    use crate::matrix::build_matrix;

    fn spectrum(g: &WeightedGraph, kind: MatrixKind) -> Vec<f64> {
        eigendecompose(&build_matrix(g, kind, true))
            .unwrap()
            .eigenvalues
    }

    fn assert_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-10, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn known_spectra() {
        assert_close(&spectrum(&complete(2), MatrixKind::Adjacency), &[-1.0, 1.0]);
        assert_close(
            &spectrum(&complete(4), MatrixKind::Adjacency),
            &[-1.0, -1.0, -1.0, 3.0],
        );
        assert_close(
            &spectrum(&complete(3), MatrixKind::Laplacian),
            &[0.0, 3.0, 3.0],
        );
    }

    #[test]
    fn rejects_non_symmetric() {
        let m = SystemMatrix::from_entries(
            MatrixKind::Adjacency,
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]),
        );
        assert!(matches!(
            eigendecompose(&m),
            Err(Error::NotSymmetric { row: 0, col: 1 })
        ));
    }

    #[test]
    fn residuals_within_contract() {
        let g = WeightedGraph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 4), (1, 5)],
        )
        .unwrap()
        .scale_alpha(2.5)
        .unwrap();
        for kind in MatrixKind::ALL {
            let m = build_matrix(&g, kind, false);
            let (s, v) = eigendecompose_with_vectors(&m).unwrap();
            let norm = m.entries().norm();
            for (i, &lambda) in s.eigenvalues.iter().enumerate() {
                let x = v.column(i);
                let r = (m.entries() * x - x * lambda).norm();
                assert!(r <= 1e-8 * norm, "residual {r} for {kind}");
            }
        }
    }

    #[test]
    fn empty_matrix_has_empty_spectrum() {
        let s = eigendecompose(&build_matrix(&WeightedGraph::empty(), MatrixKind::Adjacency, true))
            .unwrap();
        assert!(s.is_empty());
    }
}
