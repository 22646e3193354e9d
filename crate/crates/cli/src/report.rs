//! The metric report document written by `analyze` and read back by
//! `baseline`.

use std::collections::BTreeMap;
use std::path::Path;

use reqplex::structural::StructuralReport;
use reqplex::task::BaselineFlag;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::{read_text, sig10};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Graph,
    Task,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralSummary {
    pub n: usize,
    pub e: usize,
    pub p: usize,
    pub cyclomatic: i64,
    pub density: Option<f64>,
    pub density_delta: Option<f64>,
    pub absolute_density: Option<f64>,
    pub load: usize,
}

impl From<&StructuralReport> for StructuralSummary {
    fn from(r: &StructuralReport) -> Self {
        StructuralSummary {
            n: r.n,
            e: r.e,
            p: r.p,
            cyclomatic: r.cyclomatic,
            density: r.density.map(sig10),
            density_delta: r.density_delta.map(sig10),
            absolute_density: r.absolute_density.map(sig10),
            load: r.load,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub source: String,
    pub kind: EntryKind,
    pub digest: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structural: Option<StructuralSummary>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub molecule_level: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub integration_level: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub missing: Vec<String>,
}

impl Entry {
    /// Every reported metric of the entry in one map.
    pub fn values(&self) -> BTreeMap<String, f64> {
        self.metrics
            .iter()
            .chain(&self.molecule_level)
            .chain(&self.integration_level)
            .map(|(k, v)| (k.clone(), *v))
            .collect()
    }
}

/// Effective analysis settings, echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub metrics: Vec<String>,
    pub level: String,
    pub topology_only: bool,
    pub integration_mode: String,
    pub absolute_density: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryFlag {
    pub id: String,
    #[serde(flatten)]
    pub flag: BaselineFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub config: RunConfig,
    pub entries: Vec<Entry>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default)]
    pub flags: Vec<EntryFlag>,
}

impl MetricReportDocument {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read_text(path)?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::validation(format!("{}: not a metric report: {e}", path.display()))
        })
    }
}
