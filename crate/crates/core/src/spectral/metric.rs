use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{eigendecompose, Spectrum};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matrix::{build_matrix, MatrixKind};

/// The outer/inner function pair `(f, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// `f(x) = x`, `g(y) = |y|`: energy-style metrics.
    AbsLinear,
    /// `f(x) = ln x`, `g(y) = e^y`: natural-connectivity-style metrics.
    ExpLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gamma {
    One,
    OneOverN,
}

/// One instantiation of `f(gamma * sum_i g(lambda_i(M) - tr(M)/n))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetricSpec {
    pub fg: Aggregation,
    pub gamma: Gamma,
    pub matrix: MatrixKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricName {
    Ge,
    Lge,
    Nlge,
    Nc,
    Lnc,
    Nlnc,
    Gen,
    Lgen,
    Nlgen,
    Ncn,
    Lncn,
    Nlncn,
}

impl MetricName {
    pub const ALL: [MetricName; 12] = [
        MetricName::Ge,
        MetricName::Lge,
        MetricName::Nlge,
        MetricName::Nc,
        MetricName::Lnc,
        MetricName::Nlnc,
        MetricName::Gen,
        MetricName::Lgen,
        MetricName::Nlgen,
        MetricName::Ncn,
        MetricName::Lncn,
        MetricName::Nlncn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricName::Ge => "GE",
            MetricName::Lge => "LGE",
            MetricName::Nlge => "NLGE",
            MetricName::Nc => "NC",
            MetricName::Lnc => "LNC",
            MetricName::Nlnc => "NLNC",
            MetricName::Gen => "GEn",
            MetricName::Lgen => "LGEn",
            MetricName::Nlgen => "NLGEn",
            MetricName::Ncn => "NCn",
            MetricName::Lncn => "LNCn",
            MetricName::Nlncn => "NLNCn",
        }
    }

    pub fn spec(self) -> MetricSpec {
        use Aggregation::*;
        use Gamma::*;
        use MatrixKind::*;
        let (fg, gamma, matrix) = match self {
            MetricName::Ge => (AbsLinear, One, Adjacency),
            MetricName::Lge => (AbsLinear, One, Laplacian),
            MetricName::Nlge => (AbsLinear, One, NormalizedLaplacian),
            MetricName::Nc => (ExpLog, One, Adjacency),
            MetricName::Lnc => (ExpLog, One, Laplacian),
            MetricName::Nlnc => (ExpLog, One, NormalizedLaplacian),
            MetricName::Gen => (AbsLinear, OneOverN, Adjacency),
            MetricName::Lgen => (AbsLinear, OneOverN, Laplacian),
            MetricName::Nlgen => (AbsLinear, OneOverN, NormalizedLaplacian),
            MetricName::Ncn => (ExpLog, OneOverN, Adjacency),
            MetricName::Lncn => (ExpLog, OneOverN, Laplacian),
            MetricName::Nlncn => (ExpLog, OneOverN, NormalizedLaplacian),
        };
        MetricSpec { fg, gamma, matrix }
    }

    pub fn from_spec(spec: MetricSpec) -> MetricName {
        MetricName::ALL
            .into_iter()
            .find(|m| m.spec() == spec)
            .expect("every spec combination has a name")
    }

    pub fn valid_names() -> String {
        MetricName::ALL.map(MetricName::as_str).join(", ")
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::usage(format!(
                    "unknown spectral metric `{s}` (valid: {})",
                    MetricName::valid_names()
                ))
            })
    }
}

/// Applies `spec` to an already computed spectrum of the matching matrix.
pub fn evaluate_on_spectrum(spec: MetricSpec, spectrum: &Spectrum) -> Result<f64> {
    if spectrum.source_kind != spec.matrix {
        return Err(Error::usage(format!(
            "metric needs a {} spectrum, got {}",
            spec.matrix, spectrum.source_kind
        )));
    }
    let n = spectrum.len();
    let center = spectrum.trace_over_n;
    let centered = spectrum.eigenvalues.iter().map(|&l| l - center);
    match spec.fg {
        Aggregation::AbsLinear => {
            if n == 0 {
                return Ok(0.0);
            }
            let total: f64 = centered.map(f64::abs).sum();
            Ok(match spec.gamma {
                Gamma::One => total,
                Gamma::OneOverN => total / n as f64,
            })
        }
        Aggregation::ExpLog => {
            if n == 0 {
                return Err(Error::domain(
                    "natural-connectivity metrics are undefined on an empty graph",
                ));
            }
            let ys: Vec<f64> = centered.collect();
            let shift = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let log_sum = shift + ys.iter().map(|y| (y - shift).exp()).sum::<f64>().ln();
            Ok(match spec.gamma {
                Gamma::One => log_sum,
                Gamma::OneOverN => log_sum - (n as f64).ln(),
            })
        }
    }
}

pub fn evaluate_metric(g: &WeightedGraph, spec: MetricSpec, topology_only: bool) -> Result<f64> {
    let spectrum = eigendecompose(&build_matrix(g, spec.matrix, topology_only))?;
    evaluate_on_spectrum(spec, &spectrum)
}

pub fn named_metric(g: &WeightedGraph, name: &str, topology_only: bool) -> Result<f64> {
    let name: MetricName = name.parse()?;
    evaluate_metric(g, name.spec(), topology_only)
}

/// Evaluates the requested metrics, decomposing each matrix kind at most once.
pub fn all_named_metrics(
    g: &WeightedGraph,
    names: &[MetricName],
    topology_only: bool,
) -> Result<Vec<(MetricName, f64)>> {
    let mut spectra: Vec<Spectrum> = Vec::new();
    let mut out = Vec::with_capacity(names.len());
    for &name in names {
        let spec = name.spec();
        let idx = match spectra.iter().position(|s| s.source_kind == spec.matrix) {
            Some(i) => i,
            None => {
                spectra.push(eigendecompose(&build_matrix(g, spec.matrix, topology_only))?);
                spectra.len() - 1
            }
        };
        out.push((name, evaluate_on_spectrum(spec, &spectra[idx])?));
    }
    Ok(out)
}
