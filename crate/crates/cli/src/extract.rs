use std::path::{Path, PathBuf};

use reqplex::extract::{
    build_layered_graph_with, parse_requirements, project, requirement_task, ExtractOptions,
    ExtractionReport, Layer, LayerWeights,
};
use reqplex::interchange::{graph_to_json, GraphDoc, TaskDoc};
use serde::Serialize;

use crate::config::Config;
use crate::error::{exit, CliResult};
use crate::output::{self, emit, read_text, to_json};
use crate::ExtractArgs;

#[derive(Serialize)]
struct ReportDoc<'a> {
    schema_version: u32,
    tool_version: &'a str,
    input_digest: String,
    layers: Vec<&'static str>,
    collapse_entities: bool,
    #[serde(flatten)]
    report: ExtractionReport,
    warnings: Vec<String>,
}

fn read_lexicon(path: &Path) -> CliResult<Vec<String>> {
    Ok(read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.report.json"))
}

fn layer_weights(config: &Config) -> LayerWeights {
    let mut w = LayerWeights::default();
    if let Some(c) = &config.layer_weights {
        w.hierarchy = c.hierarchy.unwrap_or(w.hierarchy);
        w.reference = c.reference.unwrap_or(w.reference);
        w.entity_mention = c.entity_mention.unwrap_or(w.entity_mention);
    }
    w
}

pub fn run(args: &ExtractArgs, config: &Config) -> CliResult<i32> {
    let bytes = output::read_bytes(&args.input)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| {
        crate::error::CliError::validation(format!("{}: not UTF-8: {e}", args.input.display()))
    })?;

    let mut opts = ExtractOptions::default();
    if let Some(patterns) = &config.ref_patterns {
        opts = opts.with_ref_patterns(patterns)?;
    }
    if let Some(path) = args.lexicon.as_ref().or(config.lexicon.as_ref()) {
        opts = opts.with_lexicon(&read_lexicon(path)?);
    }
    let layer_names = args
        .layers
        .clone()
        .or_else(|| config.layers.clone())
        .unwrap_or_else(|| Layer::ALL.iter().map(|l| l.as_str().to_string()).collect());
    let mut layers = Vec::new();
    for name in &layer_names {
        let layer = Layer::parse(name.trim())?;
        if !layers.contains(&layer) {
            layers.push(layer);
        }
    }
    let collapse = args.collapse_entities || config.collapse_entities.unwrap_or(false);
    let alpha_table = config.alpha_table.clone().unwrap_or_default();

    let extraction = parse_requirements(&text, &opts)?;
    let layered = build_layered_graph_with(&extraction.records, layer_weights(config));
    let projected = project(&layered, &layers, collapse, &alpha_table)?;

    let mut warnings = Vec::new();
    if extraction.records.is_empty() {
        warnings.push(format!("{}: no requirements found", args.input.display()));
    }
    for u in &extraction.unresolved {
        warnings.push(format!("unresolved reference from {} to {}", u.from, u.target));
    }
    for w in &warnings {
        output::warn(w);
    }

    let body = match &args.task_id {
        Some(task_id) => {
            let task = requirement_task(task_id, &layered, &projected)?;
            to_json(&TaskDoc {
                task_id: task.task_id.clone(),
                components: task.components.iter().map(GraphDoc::from_graph).collect(),
                assembly: GraphDoc::from_graph(&task.assembly),
                provenance: Some(format!("extract:{}", output::digest(&bytes))),
            })
        }
        None => graph_to_json(&projected),
    };
    emit(args.out.as_deref(), &body)?;

    let report_path = args
        .report
        .clone()
        .or_else(|| args.out.as_deref().map(sidecar_path));
    if let Some(path) = report_path {
        let doc = ReportDoc {
            schema_version: output::SCHEMA_VERSION,
            tool_version: output::TOOL_VERSION,
            input_digest: output::digest(&bytes),
            layers: layers.iter().map(|l| l.as_str()).collect(),
            collapse_entities: collapse,
            report: ExtractionReport::new(&extraction, &layered, &projected),
            warnings,
        };
        emit(Some(&path), &to_json(&doc))?;
    }
    Ok(exit::OK)
}
