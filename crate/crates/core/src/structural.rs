//! Non-spectral structural metrics: cyclomatic complexity, density and its
//! variants, and load.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// `e - n + 2p`.
pub fn cyclomatic_complexity(g: &WeightedGraph) -> i64 {
    g.edge_count() as i64 - g.node_count() as i64 + 2 * g.component_count() as i64
}

/// Independent loop count, taken as the cycle rank `e - n + p`.
pub fn load(g: &WeightedGraph) -> usize {
    g.cycle_rank()
}

/// `e / (n(n-1)/2)` over the whole node set.
pub fn density(g: &WeightedGraph) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::domain(format!("density needs at least 2 nodes, got {n}")));
    }
    Ok(g.edge_count() as f64 / (n * (n - 1) / 2) as f64)
}

/// Density in excess of the connected minimum `2/n`.
pub fn density_delta(g: &WeightedGraph) -> Result<f64> {
    Ok(density(g)? - 2.0 / g.node_count() as f64)
}

/// Size-adjusted density. The formula is configurable; see
/// [`AbsoluteDensityRule`].
pub trait AbsoluteDensityFormula: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, g: &WeightedGraph) -> Result<f64>;
}

/// Default rule: `density * diameter`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DensityTimesDiameter;

impl AbsoluteDensityFormula for DensityTimesDiameter {
    fn name(&self) -> &'static str {
        "density_x_diameter"
    }

    fn evaluate(&self, g: &WeightedGraph) -> Result<f64> {
        if g.edge_count() == 0 {
            return Err(Error::domain("absolute density is undefined without edges"));
        }
        Ok(density(g)? * g.diameter() as f64)
    }
}

/// Named absolute-density rules selectable from configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum AbsoluteDensityRule {
    #[default]
    DensityTimesDiameter,
}

impl AbsoluteDensityRule {
    pub fn formula(self) -> &'static dyn AbsoluteDensityFormula {
        match self {
            AbsoluteDensityRule::DensityTimesDiameter => &DensityTimesDiameter,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "density_x_diameter" => Ok(AbsoluteDensityRule::DensityTimesDiameter),
            other => Err(Error::usage(format!(
                "unknown absolute density rule `{other}` (valid: density_x_diameter)"
            ))),
        }
    }
}

pub fn absolute_density(g: &WeightedGraph) -> Result<f64> {
    DensityTimesDiameter.evaluate(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructuralMetric {
    Cyclomatic,
    Density,
    DensityDelta,
    AbsoluteDensity,
    Load,
}

impl StructuralMetric {
    pub const ALL: [StructuralMetric; 5] = [
        StructuralMetric::Cyclomatic,
        StructuralMetric::Density,
        StructuralMetric::DensityDelta,
        StructuralMetric::AbsoluteDensity,
        StructuralMetric::Load,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StructuralMetric::Cyclomatic => "CC",
            StructuralMetric::Density => "Density",
            StructuralMetric::DensityDelta => "Density Delta",
            StructuralMetric::AbsoluteDensity => "Absolute Density",
            StructuralMetric::Load => "Load",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        StructuralMetric::ALL.into_iter().find(|m| m.as_str() == s)
    }

    pub fn evaluate(self, g: &WeightedGraph, rule: AbsoluteDensityRule) -> Result<f64> {
        match self {
            StructuralMetric::Cyclomatic => Ok(cyclomatic_complexity(g) as f64),
            StructuralMetric::Density => density(g),
            StructuralMetric::DensityDelta => density_delta(g),
            StructuralMetric::AbsoluteDensity => rule.formula().evaluate(g),
            StructuralMetric::Load => Ok(load(g) as f64),
        }
    }
}

/// All structural quantities of one graph. Density-family fields are `None`
/// where undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralReport {
    pub n: usize,
    pub e: usize,
    pub p: usize,
    pub cyclomatic: i64,
    pub density: Option<f64>,
    pub density_delta: Option<f64>,
    pub absolute_density: Option<f64>,
    pub load: usize,
}

impl StructuralReport {
    pub fn compute(g: &WeightedGraph) -> Self {
        Self::compute_with(g, AbsoluteDensityRule::default())
    }

    pub fn compute_with(g: &WeightedGraph, rule: AbsoluteDensityRule) -> Self {
        StructuralReport {
            n: g.node_count(),
            e: g.edge_count(),
            p: g.component_count(),
            cyclomatic: cyclomatic_complexity(g),
            density: density(g).ok(),
            density_delta: density_delta(g).ok(),
            absolute_density: rule.formula().evaluate(g).ok(),
            load: load(g),
        }
    }
}
