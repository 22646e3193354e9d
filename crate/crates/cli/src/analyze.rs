use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use reqplex::interchange::{graph_from_edge_list, graph_from_json, TaskDoc};
use reqplex::spectral::all_named_metrics;
use reqplex::structural::{AbsoluteDensityRule, StructuralMetric, StructuralReport};
use reqplex::task::{
    analyze_task, AnalysisOptions, IntegrationMode, IntegrationTask, INTEGRATION_METRICS,
    MOLECULE_METRICS,
};
use reqplex::{MetricName, WeightedGraph};

use crate::config::Config;
use crate::error::{exit, Category, CliError, CliResult};
use crate::output::{self, digest, emit, read_bytes, round_map, sig10, to_json};
use crate::report::{Entry, EntryKind, MetricReportDocument, RunConfig, StructuralSummary};
use crate::{AnalyzeArgs, Format, Level};

/// Parsed `--metrics` selection.
#[derive(Debug, Clone, Default)]
struct Selection {
    explicit: bool,
    spectral: Vec<MetricName>,
    structural: Vec<StructuralMetric>,
    task: BTreeSet<String>,
}

fn valid_metric_names() -> String {
    MetricName::ALL
        .iter()
        .map(|m| m.as_str())
        .chain(StructuralMetric::ALL.iter().map(|m| m.as_str()))
        .chain(MOLECULE_METRICS)
        .chain(INTEGRATION_METRICS)
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_selection(names: Option<&[String]>) -> CliResult<Selection> {
    let Some(names) = names else {
        return Ok(Selection {
            explicit: false,
            spectral: MetricName::ALL.to_vec(),
            structural: StructuralMetric::ALL.to_vec(),
            task: MOLECULE_METRICS
                .iter()
                .chain(&INTEGRATION_METRICS)
                .map(|s| s.to_string())
                .collect(),
        });
    };
    let mut sel = Selection {
        explicit: true,
        ..Selection::default()
    };
    for raw in names {
        let name = raw.trim();
        if name.is_empty() {
            continue;
        }
        if let Ok(m) = name.parse::<MetricName>() {
            if !sel.spectral.contains(&m) {
                sel.spectral.push(m);
            }
        } else if let Some(m) = StructuralMetric::parse(name) {
            if !sel.structural.contains(&m) {
                sel.structural.push(m);
            }
        } else if MOLECULE_METRICS.contains(&name) || INTEGRATION_METRICS.contains(&name) {
            sel.task.insert(name.to_string());
        } else {
            return Err(CliError::usage(format!(
                "unknown metric `{name}`; valid names: {}",
                valid_metric_names()
            )));
        }
    }
    if sel.spectral.is_empty() && sel.structural.is_empty() && sel.task.is_empty() {
        return Err(CliError::usage("--metrics selects nothing"));
    }
    Ok(sel)
}

fn parse_level(s: &str) -> CliResult<Level> {
    match s {
        "molecule" => Ok(Level::Molecule),
        "integration" => Ok(Level::Integration),
        "both" => Ok(Level::Both),
        _ => Err(CliError::usage(format!(
            "unknown level `{s}` (valid: molecule, integration, both)"
        ))),
    }
}

pub fn level_name(level: Level) -> &'static str {
    match level {
        Level::Molecule => "molecule",
        Level::Integration => "integration",
        Level::Both => "both",
    }
}

pub fn resolve_level(flag: Option<Level>, config: &Config) -> CliResult<Level> {
    match (flag, &config.level) {
        (Some(l), _) => Ok(l),
        (None, Some(s)) => parse_level(s),
        (None, None) => Ok(Level::Both),
    }
}

fn parse_mode(s: &str) -> CliResult<IntegrationMode> {
    match s {
        "assembly" => Ok(IntegrationMode::Assembly),
        "delta" => Ok(IntegrationMode::Delta),
        _ => Err(CliError::usage(format!(
            "unknown integration mode `{s}` (valid: assembly, delta)"
        ))),
    }
}

fn parse_format(s: &str) -> CliResult<Format> {
    match s {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        _ => Err(CliError::usage(format!("unknown format `{s}` (valid: json, csv)"))),
    }
}

/// Input files in sorted-name order. Directories are read one level deep;
/// hidden files and `.report.json` sidecars are skipped.
fn collect_inputs(path: &Path) -> CliResult<Vec<PathBuf>> {
    let meta = std::fs::metadata(path).map_err(|e| CliError::io(path, e))?;
    if !meta.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for item in std::fs::read_dir(path).map_err(|e| CliError::io(path, e))? {
        let item = item.map_err(|e| CliError::io(path, e))?;
        let p = item.path();
        let name = item.file_name().to_string_lossy().into_owned();
        if name.starts_with('.') || name.ends_with(".report.json") || !p.is_file() {
            continue;
        }
        files.push(p);
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::usage(format!("{}: no input files", path.display())));
    }
    Ok(files)
}

enum Parsed {
    Graph(WeightedGraph),
    Task(IntegrationTask),
}

fn parse_input(path: &Path, text: &str) -> CliResult<Parsed> {
    let ctx = path.display().to_string();
    let is_json = path.extension().is_some_and(|e| e == "json");
    if !is_json {
        return Ok(Parsed::Graph(
            graph_from_edge_list(text).map_err(|e| CliError::from(e).with_context(&ctx))?,
        ));
    }
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::validation(format!("{ctx}: invalid JSON: {e}")))?;
    if value.get("task_id").is_some() {
        let doc: TaskDoc = serde_json::from_value(value)
            .map_err(|e| CliError::validation(format!("{ctx}: invalid task: {e}")))?;
        let task = IntegrationTask::from_doc(&doc).map_err(|e| CliError::from(e).with_context(&ctx))?;
        Ok(Parsed::Task(task))
    } else {
        Ok(Parsed::Graph(
            graph_from_json(text).map_err(|e| CliError::from(e).with_context(&ctx))?,
        ))
    }
}

struct Settings {
    selection: Selection,
    level: Level,
    opts: AnalysisOptions,
}

struct FileResult {
    entry: Entry,
    warnings: Vec<String>,
}

fn analyze_graph(g: &WeightedGraph, entry: &mut Entry, s: &Settings) -> CliResult<Vec<String>> {
    let mut warnings = Vec::new();
    if !s.selection.spectral.is_empty() {
        if g.is_empty() {
            return Err(CliError::new(
                Category::Domain,
                format!("{}: spectral metrics are undefined on an empty graph", entry.source),
            ));
        }
        for (name, v) in all_named_metrics(g, &s.selection.spectral, s.opts.topology_only)? {
            entry.metrics.insert(name.as_str().to_string(), v);
        }
    }
    for &m in &s.selection.structural {
        match m.evaluate(g, s.opts.absolute_density) {
            Ok(v) => {
                entry.metrics.insert(m.as_str().to_string(), v);
            }
            Err(e) if !s.selection.explicit => {
                entry.missing.push(m.as_str().to_string());
                warnings.push(format!("{}: {}: {e}", entry.source, m.as_str()));
            }
            Err(e) => return Err(CliError::from(e).with_context(&entry.source)),
        }
    }
    if s.selection.explicit && !s.selection.task.is_empty() {
        warnings.push(format!("{}: task metrics ignored for a graph input", entry.source));
    }
    entry.structural = Some(StructuralSummary::from(&StructuralReport::compute_with(
        g,
        s.opts.absolute_density,
    )));
    Ok(warnings)
}

fn analyze_task_entry(task: &IntegrationTask, entry: &mut Entry, s: &Settings) -> CliResult<Vec<String>> {
    let (row, notes) = analyze_task(task, &s.opts).map_err(|e| CliError::from(e).with_context(&entry.source))?;
    let keep = |name: &String| s.selection.task.contains(name);
    if s.level != Level::Integration {
        entry.molecule_level = row.molecule_level.into_iter().filter(|(k, _)| keep(k)).collect();
    }
    if s.level != Level::Molecule {
        entry.integration_level = row.integration_level.into_iter().filter(|(k, _)| keep(k)).collect();
    }
    let mut wanted: Vec<&str> = Vec::new();
    if s.level != Level::Integration {
        wanted.extend(MOLECULE_METRICS);
    }
    if s.level != Level::Molecule {
        wanted.extend(INTEGRATION_METRICS);
    }
    let values = entry.values();
    entry.missing = wanted
        .into_iter()
        .filter(|m| s.selection.task.contains(*m) && !values.contains_key(*m))
        .map(String::from)
        .collect();
    let mut warnings: Vec<String> = notes
        .into_iter()
        .map(|n| format!("{}: {n}", entry.source))
        .collect();
    if s.selection.explicit && (!s.selection.spectral.is_empty() || !s.selection.structural.is_empty()) {
        warnings.push(format!("{}: graph metrics ignored for a task input", entry.source));
    }
    Ok(warnings)
}

fn process(path: &Path, root: &Path, s: &Settings) -> CliResult<FileResult> {
    let bytes = read_bytes(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| CliError::validation(format!("{}: not UTF-8: {e}", path.display())))?;
    let source = path
        .strip_prefix(root)
        .ok()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(path)
        .to_string_lossy()
        .into_owned();
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| source.clone());
    let parsed = parse_input(path, &text)?;
    let mut entry = Entry {
        id: stem,
        source,
        kind: EntryKind::Graph,
        digest: digest(&bytes),
        metrics: BTreeMap::new(),
        structural: None,
        molecule_level: BTreeMap::new(),
        integration_level: BTreeMap::new(),
        missing: Vec::new(),
    };
    let warnings = match parsed {
        Parsed::Graph(g) => analyze_graph(&g, &mut entry, s)?,
        Parsed::Task(t) => {
            entry.kind = EntryKind::Task;
            entry.id = t.task_id.clone();
            analyze_task_entry(&t, &mut entry, s)?
        }
    };
    entry.metrics = round_map(&entry.metrics);
    entry.molecule_level = round_map(&entry.molecule_level);
    entry.integration_level = round_map(&entry.integration_level);
    Ok(FileResult { entry, warnings })
}

fn format_number(v: f64) -> String {
    format!("{}", sig10(v))
}

/// Wide CSV: `task_id` followed by the sorted union of metric names.
pub fn to_csv(entries: &[Entry]) -> CliResult<String> {
    let columns: BTreeSet<String> = entries.iter().flat_map(|e| e.values().into_keys()).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once("task_id").chain(columns.iter().map(String::as_str)).collect();
    let csv_err = |e: csv::Error| CliError::new(Category::Io, format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for e in entries {
        let values = e.values();
        let mut record = vec![e.id.clone()];
        record.extend(columns.iter().map(|c| values.get(c).map(|v| format_number(*v)).unwrap_or_default()));
        w.write_record(&record).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::new(Category::Io, format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn run(args: &AnalyzeArgs, config: &Config) -> CliResult<i32> {
    let selection = parse_selection(args.metrics.as_deref().or(config.metrics.as_deref()))?;
    let level = resolve_level(args.level, config)?;
    let mode = match args.integration_mode.as_ref().or(config.integration_mode.as_ref()) {
        Some(s) => parse_mode(s)?,
        None => IntegrationMode::default(),
    };
    let absolute_density = match &config.absolute_density {
        Some(s) => AbsoluteDensityRule::parse(s)?,
        None => AbsoluteDensityRule::default(),
    };
    let format = match (args.format, &config.format) {
        (Some(f), _) => f,
        (None, Some(s)) => parse_format(s)?,
        (None, None) => Format::Json,
    };
    let topology_only = args.topology_only || config.topology_only.unwrap_or(false);
    let no_timestamp = args.no_timestamp || config.no_timestamp.unwrap_or(false);
    let settings = Settings {
        opts: AnalysisOptions {
            topology_only,
            absolute_density,
            integration_mode: mode,
        },
        level,
        selection,
    };

    let files = collect_inputs(&args.input)?;
    let results: Vec<CliResult<FileResult>> = files
        .par_iter()
        .map(|f| process(f, &args.input, &settings))
        .collect();
    let mut entries = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for r in results {
        let r = r?;
        entries.push(r.entry);
        warnings.extend(r.warnings);
    }
    for w in &warnings {
        output::warn(w);
    }

    let body = match format {
        Format::Csv => to_csv(&entries)?,
        Format::Json => {
            let listing: String = entries.iter().map(|e| format!("{}\0{}\n", e.source, e.digest)).collect();
            let mut metrics: Vec<String> = settings.selection.spectral.iter().map(|m| m.as_str().to_string()).collect();
            metrics.extend(settings.selection.structural.iter().map(|m| m.as_str().to_string()));
            metrics.extend(settings.selection.task.iter().cloned());
            let doc = MetricReportDocument {
                schema_version: output::SCHEMA_VERSION,
                tool_version: output::TOOL_VERSION.to_string(),
                input_digest: digest(listing.as_bytes()),
                generated_at: output::timestamp(no_timestamp),
                config: RunConfig {
                    metrics,
                    level: level_name(level).to_string(),
                    topology_only,
                    integration_mode: match mode {
                        IntegrationMode::Assembly => "assembly".into(),
                        IntegrationMode::Delta => "delta".into(),
                    },
                    absolute_density: absolute_density.formula().name().to_string(),
                },
                entries,
                warnings,
                flags: Vec::new(),
            };
            to_json(&doc)
        }
    };
    emit(args.out.as_deref(), &body)?;
    Ok(exit::OK)
}
