//! Optional TOML configuration supplying defaults for command-line flags.
//!
//! Recognised keys (all optional):
//!
//! ```toml
//! metrics = ["GE", "LGE", "Load"]
//! level = "both"                 # molecule | integration | both
//! topology_only = false
//! integration_mode = "assembly"  # assembly | delta
//! absolute_density = "density_x_diameter"
//! ci = 0.95
//! regression = ["linear", "quadratic"]
//! z_threshold = 2.0
//! format = "json"                # json | csv
//! no_timestamp = false
//! lexicon = "entities.txt"
//! layers = ["hierarchy", "reference", "entity_mention"]
//! collapse_entities = false
//! ref_patterns = ['(?i)\bsee\s+(\d+(?:\.\d+)*)']
//!
//! [layer_weights]
//! hierarchy = 1.0
//! reference = 1.0
//! entity_mention = 1.0
//!
//! [alpha_table]
//! pump = 2.0
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub metrics: Option<Vec<String>>,
    pub level: Option<String>,
    pub topology_only: Option<bool>,
    pub integration_mode: Option<String>,
    pub absolute_density: Option<String>,
    pub ci: Option<f64>,
    pub regression: Option<Vec<String>>,
    pub z_threshold: Option<f64>,
    pub format: Option<String>,
    pub no_timestamp: Option<bool>,
    pub lexicon: Option<PathBuf>,
    pub layers: Option<Vec<String>>,
    pub collapse_entities: Option<bool>,
    pub ref_patterns: Option<Vec<String>>,
    pub layer_weights: Option<LayerWeightsConfig>,
    pub alpha_table: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerWeightsConfig {
    pub hierarchy: Option<f64>,
    pub reference: Option<f64>,
    pub entity_mention: Option<f64>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> CliResult<Config> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("config {}: {}", path.display(), e.message())))
    }
}
