use std::collections::HashMap;
use std::path::Path;

use reqplex::stats::{correlate, ks_normal, ols_poly, RegressionResult, KS_CAVEAT};
use reqplex::task::{INTEGRATION_METRICS, MOLECULE_METRICS};
use serde::Serialize;

use crate::analyze::{level_name, resolve_level};
use crate::config::Config;
use crate::error::{exit, Category, CliError, CliResult};
use crate::output::{self, digest, emit, read_bytes, sig10, to_json};
use crate::{CorrelateArgs, Level};

const MIN_ROWS: usize = 4;
const CURVE_SAMPLES: usize = 50;

/// Header plus rows keyed by the join column, in file order.
struct Table {
    columns: Vec<String>,
    rows: Vec<(String, Vec<String>)>,
}

impl Table {
    fn read(path: &Path, key: &str) -> CliResult<(Table, Vec<u8>)> {
        let bytes = read_bytes(path)?;
        let ctx = path.display().to_string();
        let csv_err = |e: csv::Error| CliError::validation(format!("{ctx}: {e}"));
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes.as_slice());
        let header: Vec<String> = reader.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let Some(key_at) = header.iter().position(|h| h == key) else {
            return Err(CliError::usage(format!("{ctx}: join key `{key}` not in header")));
        };
        let columns: Vec<String> = header.iter().filter(|h| *h != key).cloned().collect();
        let mut rows = Vec::new();
        let mut seen = HashMap::new();
        for record in reader.records() {
            let record = record.map_err(csv_err)?;
            let id = record.get(key_at).unwrap_or_default().to_string();
            if seen.insert(id.clone(), ()).is_some() {
                return Err(CliError::validation(format!("{ctx}: duplicate key `{id}`")));
            }
            let cells = record
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != key_at)
                .map(|(_, c)| c.to_string())
                .collect();
            rows.push((id, cells));
        }
        Ok((Table { columns, rows }, bytes))
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

fn parse_cell(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

#[derive(Serialize)]
struct CorrelationOut {
    r: f64,
    ci_low: f64,
    ci_high: f64,
}

#[derive(Serialize)]
struct RegressionOut {
    model: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_errors: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dof: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct MetricOut {
    metric: String,
    n: usize,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    correlation: Option<CorrelationOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    regressions: Vec<RegressionOut>,
}

#[derive(Serialize)]
struct KsOut {
    column: String,
    statistic: f64,
    p_value: f64,
    n: usize,
    caveat: &'static str,
}

#[derive(Serialize)]
struct CorrelationReport {
    schema_version: u32,
    tool_version: &'static str,
    input_digest: String,
    join_key: String,
    effort_column: String,
    level: &'static str,
    ci_level: f64,
    joined_rows: usize,
    metrics: Vec<MetricOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ks: Option<KsOut>,
    warnings: Vec<String>,
}

fn parse_models(names: &[String]) -> CliResult<Vec<(&'static str, usize)>> {
    let mut out = Vec::new();
    for n in names {
        let model = match n.trim() {
            "linear" => ("linear", 1),
            "quadratic" => ("quadratic", 2),
            "" => continue,
            other => {
                return Err(CliError::usage(format!(
                    "unknown regression `{other}` (valid: linear, quadratic)"
                )))
            }
        };
        if !out.contains(&model) {
            out.push(model);
        }
    }
    Ok(out)
}

fn level_allows(level: Level, metric: &str) -> bool {
    match level {
        Level::Both => true,
        Level::Molecule => MOLECULE_METRICS.contains(&metric),
        Level::Integration => INTEGRATION_METRICS.contains(&metric),
    }
}

fn regression_out(model: &'static str, fit: reqplex::Result<RegressionResult>) -> RegressionOut {
    let round = |v: &[f64]| v.iter().map(|x| sig10(*x)).collect::<Vec<_>>();
    match fit {
        Ok(f) => RegressionOut {
            model,
            beta: Some(round(&f.beta)),
            std_errors: Some(round(&f.std_errors)),
            p_values: Some(round(&f.p_values)),
            r_squared: Some(sig10(f.r_squared)),
            dof: Some(f.dof),
            error: None,
        },
        Err(e) => RegressionOut {
            model,
            beta: None,
            std_errors: None,
            p_values: None,
            r_squared: None,
            dof: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn run(args: &CorrelateArgs, config: &Config) -> CliResult<i32> {
    let key = args.join_key.as_str();
    let level = resolve_level(args.level, config)?;
    let ci = args.ci.or(config.ci).unwrap_or(0.95);
    if !(ci > 0.0 && ci < 1.0) {
        return Err(CliError::usage(format!("--ci {ci} not in (0, 1)")));
    }
    let models = match args.regression.as_ref().or(config.regression.as_ref()) {
        Some(names) => parse_models(names)?,
        None => Vec::new(),
    };

    let (metrics, metrics_bytes) = Table::read(&args.input, key)?;
    let (effort, effort_bytes) = Table::read(&args.effort, key)?;
    let effort_column = match &args.effort_column {
        Some(c) => c.clone(),
        None if effort.columns.len() == 1 => effort.columns[0].clone(),
        None => {
            return Err(CliError::usage(format!(
                "{}: several columns; choose one with --effort-column ({})",
                args.effort.display(),
                effort.columns.join(", ")
            )))
        }
    };
    let effort_at = effort.column(&effort_column).ok_or_else(|| {
        CliError::usage(format!("effort column `{effort_column}` not found"))
    })?;

    let mut effort_by_key: HashMap<&str, f64> = HashMap::new();
    for (id, cells) in &effort.rows {
        let v = parse_cell(&cells[effort_at]).ok_or_else(|| {
            CliError::validation(format!("effort for `{id}` is not a number: `{}`", cells[effort_at]))
        })?;
        effort_by_key.insert(id, v);
    }
    let joined: Vec<(&Vec<String>, f64)> = metrics
        .rows
        .iter()
        .filter_map(|(id, cells)| effort_by_key.get(id.as_str()).map(|&y| (cells, y)))
        .collect();
    if joined.len() < MIN_ROWS {
        return Err(CliError::usage(format!(
            "join on `{key}` produced {} rows; at least {MIN_ROWS} are needed",
            joined.len()
        )));
    }

    let selected: Vec<String> = match args.metrics.as_ref() {
        Some(names) => {
            let names: Vec<String> = names.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            for n in &names {
                if metrics.column(n).is_none() {
                    return Err(CliError::usage(format!(
                        "metric column `{n}` not found (available: {})",
                        metrics.columns.join(", ")
                    )));
                }
            }
            names
        }
        None => metrics
            .columns
            .iter()
            .filter(|c| level_allows(level, c))
            .filter(|c| {
                let at = metrics.column(c).expect("column exists");
                joined.iter().any(|(cells, _)| parse_cell(&cells[at]).is_some())
            })
            .cloned()
            .collect(),
    };
    if selected.is_empty() {
        return Err(CliError::usage("no numeric metric columns to correlate"));
    }

    let mut warnings = Vec::new();
    let mut results = Vec::new();
    let mut plot = csv::Writer::from_writer(Vec::new());
    let plot_err = |e: csv::Error| CliError::new(Category::Io, format!("plot csv: {e}"));
    plot.write_record(["metric", "series", "x", "y"]).map_err(plot_err)?;

    for name in &selected {
        let at = metrics.column(name).expect("validated column");
        let (x, y): (Vec<f64>, Vec<f64>) = joined
            .iter()
            .filter_map(|(cells, y)| parse_cell(&cells[at]).map(|x| (x, *y)))
            .unzip();
        let mut out = MetricOut {
            metric: name.clone(),
            n: x.len(),
            status: "ok",
            correlation: None,
            regressions: Vec::new(),
        };
        if x.len() < MIN_ROWS {
            out.status = "insufficient data";
            warnings.push(format!("{name}: only {} numeric rows", x.len()));
            results.push(out);
            continue;
        }
        match correlate(&x, &y, ci) {
            Ok(c) => {
                out.correlation = Some(CorrelationOut {
                    r: sig10(c.r),
                    ci_low: sig10(c.ci_low),
                    ci_high: sig10(c.ci_high),
                })
            }
            Err(e) if e.kind() == reqplex::ErrorKind::Domain => {
                out.status = "undefined correlation";
                warnings.push(format!("{name}: undefined correlation ({e})"));
            }
            Err(e) => return Err(e.into()),
        }
        for (xi, yi) in x.iter().zip(&y) {
            plot.write_record([name.as_str(), "observed", &sig10(*xi).to_string(), &sig10(*yi).to_string()])
                .map_err(plot_err)?;
        }
        let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        for &(model, degree) in &models {
            let fit = ols_poly(&x, &y, degree);
            if let Ok(f) = &fit {
                for k in 0..CURVE_SAMPLES {
                    let t = lo + (hi - lo) * k as f64 / (CURVE_SAMPLES - 1) as f64;
                    plot.write_record([name.as_str(), model, &sig10(t).to_string(), &sig10(f.predict(t)).to_string()])
                        .map_err(plot_err)?;
                }
            }
            out.regressions.push(regression_out(model, fit));
        }
        results.push(out);
    }

    let ks = if args.ks {
        let ys: Vec<f64> = joined.iter().map(|(_, y)| *y).collect();
        let k = ks_normal(&ys)?;
        Some(KsOut {
            column: effort_column.clone(),
            statistic: sig10(k.statistic),
            p_value: sig10(k.p_value),
            n: k.n,
            caveat: KS_CAVEAT,
        })
    } else {
        None
    };

    for w in &warnings {
        output::warn(w);
    }
    let listing = format!("{}\n{}\n", digest(&metrics_bytes), digest(&effort_bytes));
    let report = CorrelationReport {
        schema_version: output::SCHEMA_VERSION,
        tool_version: output::TOOL_VERSION,
        input_digest: digest(listing.as_bytes()),
        join_key: key.to_string(),
        effort_column,
        level: level_name(level),
        ci_level: ci,
        joined_rows: joined.len(),
        metrics: results,
        ks,
        warnings,
    };
    if let Some(path) = &args.plot_csv {
        let bytes = plot.into_inner().map_err(|e| CliError::new(Category::Io, format!("plot csv: {e}")))?;
        emit(Some(path), &String::from_utf8(bytes).expect("csv output is UTF-8"))?;
    }
    emit(args.out.as_deref(), &to_json(&report))?;
    Ok(exit::OK)
}
