//! Molecule-level and integration-level metrics over integration tasks, and
//! baseline profiling of metric rows.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::interchange::TaskDoc;
use crate::spectral::{evaluate_metric, MetricName};
use crate::structural::{cyclomatic_complexity, density, density_delta, load, AbsoluteDensityRule};

pub const TOTAL_CC: &str = "Total CC";
pub const AVERAGE_CC: &str = "Average CC";
pub const AVERAGE_GE: &str = "Average GE";
pub const AVERAGE_LGE: &str = "Average LGE";
pub const AVERAGE_DENSITY: &str = "Average Density";
pub const AVERAGE_ABSOLUTE_DENSITY: &str = "Average Absolute Density";

pub const INTEGRATION_GE: &str = "Integration GE";
pub const INTEGRATION_LGE: &str = "Integration LGE";
pub const INTEGRATION_DENSITY: &str = "Integration Density";
pub const INTEGRATION_ABSOLUTE_DENSITY: &str = "Integration Absolute Density";
pub const INTEGRATION_DENSITY_DELTA: &str = "Integration Density Delta";
pub const INTEGRATION_LOAD: &str = "Integration Load";

pub const MOLECULE_METRICS: [&str; 6] = [
    TOTAL_CC,
    AVERAGE_CC,
    AVERAGE_GE,
    AVERAGE_LGE,
    AVERAGE_DENSITY,
    AVERAGE_ABSOLUTE_DENSITY,
];

pub const INTEGRATION_METRICS: [&str; 6] = [
    INTEGRATION_GE,
    INTEGRATION_LGE,
    INTEGRATION_DENSITY,
    INTEGRATION_ABSOLUTE_DENSITY,
    INTEGRATION_DENSITY_DELTA,
    INTEGRATION_LOAD,
];

/// A set of component graphs ("molecules") and the assembled structure.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationTask {
    pub task_id: String,
    pub components: Vec<WeightedGraph>,
    pub assembly: WeightedGraph,
    pub provenance: Option<String>,
}

impl IntegrationTask {
    /// Checks that components are connected and pairwise disjoint, and that
    /// the assembly contains every component node.
    pub fn new(
        task_id: impl Into<String>,
        components: Vec<WeightedGraph>,
        assembly: WeightedGraph,
    ) -> Result<Self> {
        let task_id = task_id.into();
        let mut seen = HashSet::new();
        for (i, c) in components.iter().enumerate() {
            if !c.is_connected() {
                return Err(Error::InvalidTask(format!(
                    "{task_id}: component {i} is not connected"
                )));
            }
            for node in c.nodes() {
                if !seen.insert(node.id.as_str()) {
                    return Err(Error::InvalidTask(format!(
                        "{task_id}: node `{}` appears in more than one component",
                        node.id
                    )));
                }
                if assembly.index_of(&node.id).is_none() {
                    return Err(Error::InvalidTask(format!(
                        "{task_id}: component node `{}` missing from assembly",
                        node.id
                    )));
                }
            }
        }
        Ok(IntegrationTask {
            task_id,
            components,
            assembly,
            provenance: None,
        })
    }

    pub fn from_doc(doc: &TaskDoc) -> Result<Self> {
        let components = doc
            .components
            .iter()
            .map(|c| c.to_graph())
            .collect::<Result<Vec<_>>>()?;
        let mut task = IntegrationTask::new(doc.task_id.clone(), components, doc.assembly.to_graph()?)?;
        task.provenance = doc.provenance.clone();
        Ok(task)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMode {
    /// Metrics of the assembled graph.
    #[default]
    Assembly,
    /// Assembly metric minus the component sum (GE, LGE, Load) or component
    /// mean (density family).
    Delta,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalysisOptions {
    pub topology_only: bool,
    pub absolute_density: AbsoluteDensityRule,
    pub integration_mode: IntegrationMode,
}

/// Metric values for one level, plus the entries that could not be computed.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LevelMetrics {
    pub values: BTreeMap<String, f64>,
    pub missing: Vec<String>,
    pub notes: Vec<String>,
}

fn mean_of(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn energy(g: &WeightedGraph, name: MetricName, opts: &AnalysisOptions) -> Result<f64> {
    evaluate_metric(g, name.spec(), opts.topology_only)
}

fn defined_values<F>(graphs: &[WeightedGraph], f: F) -> (Vec<f64>, usize)
where
    F: Fn(&WeightedGraph) -> Result<f64>,
{
    let mut values = Vec::new();
    let mut skipped = 0;
    for g in graphs {
        match f(g) {
            Ok(v) => values.push(v),
            Err(_) => skipped += 1,
        }
    }
    (values, skipped)
}

pub fn molecule_level_metrics(task: &IntegrationTask, opts: &AnalysisOptions) -> Result<LevelMetrics> {
    let comps = &task.components;
    if comps.is_empty() {
        return Err(Error::usage(format!("{}: task has no components", task.task_id)));
    }
    let mut out = LevelMetrics::default();
    let cc: Vec<f64> = comps.iter().map(|c| cyclomatic_complexity(c) as f64).collect();
    out.values.insert(TOTAL_CC.into(), cc.iter().sum());
    out.values.insert(AVERAGE_CC.into(), mean_of(&cc).unwrap_or(0.0));

    let ge = comps
        .iter()
        .map(|c| energy(c, MetricName::Ge, opts))
        .collect::<Result<Vec<_>>>()?;
    let lge = comps
        .iter()
        .map(|c| energy(c, MetricName::Lge, opts))
        .collect::<Result<Vec<_>>>()?;
    out.values.insert(AVERAGE_GE.into(), mean_of(&ge).unwrap_or(0.0));
    out.values.insert(AVERAGE_LGE.into(), mean_of(&lge).unwrap_or(0.0));

    let rule = opts.absolute_density.formula();
    let families: [(&str, Box<dyn Fn(&WeightedGraph) -> Result<f64>>); 2] = [
        (AVERAGE_DENSITY, Box::new(density)),
        (AVERAGE_ABSOLUTE_DENSITY, Box::new(|g| rule.evaluate(g))),
    ];
    for (name, f) in families {
        let (values, skipped) = defined_values(comps, f);
        if skipped > 0 {
            out.notes.push(format!(
                "{name}: skipped {skipped} of {} components where undefined",
                comps.len()
            ));
        }
        match mean_of(&values) {
            Some(v) => {
                out.values.insert(name.into(), v);
            }
            None => out.missing.push(name.into()),
        }
    }
    Ok(out)
}

pub fn integration_level_metrics(
    task: &IntegrationTask,
    opts: &AnalysisOptions,
) -> Result<LevelMetrics> {
    let g = &task.assembly;
    if g.is_empty() {
        return Err(Error::domain(format!("{}: assembly is empty", task.task_id)));
    }
    let delta = opts.integration_mode == IntegrationMode::Delta;
    let comps = &task.components;
    let mut out = LevelMetrics::default();

    let additive: [(&str, Box<dyn Fn(&WeightedGraph) -> Result<f64>>); 3] = [
        (INTEGRATION_GE, Box::new(|x| energy(x, MetricName::Ge, opts))),
        (INTEGRATION_LGE, Box::new(|x| energy(x, MetricName::Lge, opts))),
        (INTEGRATION_LOAD, Box::new(|x| Ok(load(x) as f64))),
    ];
    for (name, f) in additive {
        let mut v = f(g)?;
        if delta {
            for c in comps {
                v -= f(c)?;
            }
        }
        out.values.insert(name.into(), v);
    }

    let rule = opts.absolute_density.formula();
    let intensive: [(&str, Box<dyn Fn(&WeightedGraph) -> Result<f64>>); 3] = [
        (INTEGRATION_DENSITY, Box::new(density)),
        (INTEGRATION_ABSOLUTE_DENSITY, Box::new(|x| rule.evaluate(x))),
        (INTEGRATION_DENSITY_DELTA, Box::new(density_delta)),
    ];
    for (name, f) in intensive {
        let whole = match f(g) {
            Ok(v) => v,
            Err(e) => {
                out.missing.push(name.into());
                out.notes.push(format!("{name}: {e}"));
                continue;
            }
        };
        if !delta {
            out.values.insert(name.into(), whole);
            continue;
        }
        let (parts, _) = defined_values(comps, &f);
        match mean_of(&parts) {
            Some(m) => {
                out.values.insert(name.into(), whole - m);
            }
            None => {
                out.missing.push(name.into());
                out.notes.push(format!("{name}: no component defines it"));
            }
        }
    }
    Ok(out)
}

/// Both levels for one task.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TaskMetricRow {
    pub task_id: String,
    pub molecule_level: BTreeMap<String, f64>,
    pub integration_level: BTreeMap<String, f64>,
}

impl TaskMetricRow {
    /// Every metric of both levels in one map.
    pub fn values(&self) -> BTreeMap<String, f64> {
        self.molecule_level
            .iter()
            .chain(&self.integration_level)
            .map(|(k, v)| (k.clone(), *v))
            .collect()
    }
}

/// Computes both levels; returns the row and any notes about missing entries.
pub fn analyze_task(task: &IntegrationTask, opts: &AnalysisOptions) -> Result<(TaskMetricRow, Vec<String>)> {
    let molecule = molecule_level_metrics(task, opts)?;
    let integration = integration_level_metrics(task, opts)?;
    let mut notes = molecule.notes;
    notes.extend(integration.notes);
    let row = TaskMetricRow {
        task_id: task.task_id.clone(),
        molecule_level: molecule.values,
        integration_level: integration.values,
    };
    Ok((row, notes))
}

pub const BASELINE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStats {
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineProfile {
    pub schema_version: u32,
    pub corpus_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<String>,
    pub metrics: BTreeMap<String, MetricStats>,
}

/// Per-metric sample mean and standard deviation (`n - 1` denominator).
/// Metrics observed in fewer than two rows are left out.
pub fn baseline_build<'a, I>(rows: I) -> Result<BaselineProfile>
where
    I: IntoIterator<Item = &'a BTreeMap<String, f64>>,
{
    let mut columns: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut corpus_size = 0;
    for row in rows {
        corpus_size += 1;
        for (k, v) in row {
            columns.entry(k).or_default().push(*v);
        }
    }
    if corpus_size < 2 {
        return Err(Error::usage(format!(
            "baseline needs at least 2 rows, got {corpus_size}"
        )));
    }
    let metrics = columns
        .into_iter()
        .filter(|(_, vs)| vs.len() >= 2)
        .map(|(k, vs)| {
            let mean = vs.iter().sum::<f64>() / vs.len() as f64;
            let sd = if vs.windows(2).all(|w| w[0] == w[1]) {
                0.0
            } else {
                crate::stats::sample_sd(&vs)
            };
            (
                k.to_string(),
                MetricStats {
                    mean,
                    sd,
                    count: vs.len(),
                },
            )
        })
        .collect();
    Ok(BaselineProfile {
        schema_version: BASELINE_SCHEMA_VERSION,
        corpus_size,
        created_at: None,
        metrics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagReason {
    Deviation,
    UnknownMetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineFlag {
    pub metric: String,
    pub reason: FlagReason,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
}

pub const DEFAULT_Z_THRESHOLD: f64 = 2.0;

/// Flags metrics whose value lies more than `z_threshold` standard deviations
/// from the profile mean. Zero-variance metrics flag on any deviation.
pub fn baseline_check(
    profile: &BaselineProfile,
    row: &BTreeMap<String, f64>,
    z_threshold: f64,
) -> Result<Vec<BaselineFlag>> {
    if !(z_threshold > 0.0) {
        return Err(Error::usage(format!(
            "z threshold must be positive, got {z_threshold}"
        )));
    }
    let mut flags = Vec::new();
    for (metric, &value) in row {
        let Some(stats) = profile.metrics.get(metric) else {
            flags.push(BaselineFlag {
                metric: metric.clone(),
                reason: FlagReason::UnknownMetric,
                value,
                mean: None,
                sd: None,
                z: None,
            });
            continue;
        };
        let dev = value - stats.mean;
        let (hit, z) = if stats.sd > 0.0 {
            (dev.abs() > z_threshold * stats.sd, Some(dev / stats.sd))
        } else {
            (dev != 0.0, None)
        };
        if hit {
            flags.push(BaselineFlag {
                metric: metric.clone(),
                reason: FlagReason::Deviation,
                value,
                mean: Some(stats.mean),
                sd: Some(stats.sd),
                z,
            });
        }
    }
    Ok(flags)
}
