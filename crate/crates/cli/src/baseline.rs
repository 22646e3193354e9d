use std::path::{Path, PathBuf};

use reqplex::task::{baseline_build, baseline_check, BaselineProfile, DEFAULT_Z_THRESHOLD};

use crate::config::Config;
use crate::error::{exit, CliError, CliResult};
use crate::output::{self, emit, read_text, sig10, to_json};
use crate::report::{EntryFlag, MetricReportDocument};
use crate::BaselineAction;

fn report_files(inputs: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for path in inputs {
        let meta = std::fs::metadata(path).map_err(|e| CliError::io(path, e))?;
        if !meta.is_dir() {
            files.push(path.clone());
            continue;
        }
        let mut found: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| CliError::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
            .collect();
        found.sort();
        files.extend(found);
    }
    Ok(files)
}

fn load_profile(path: &Path) -> CliResult<BaselineProfile> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("{}: not a baseline profile: {e}", path.display())))
}

pub fn run(action: &BaselineAction, config: &Config) -> CliResult<i32> {
    match action {
        BaselineAction::Build {
            input,
            out,
            no_timestamp,
        } => {
            let mut rows = Vec::new();
            for f in report_files(input)? {
                let doc = MetricReportDocument::load(&f)?;
                rows.extend(doc.entries.iter().map(|e| e.values()));
            }
            let mut profile = baseline_build(&rows)?;
            for stats in profile.metrics.values_mut() {
                stats.mean = sig10(stats.mean);
                stats.sd = sig10(stats.sd);
            }
            profile.created_at = output::timestamp(*no_timestamp || config.no_timestamp.unwrap_or(false));
            emit(out.as_deref(), &to_json(&profile))?;
            Ok(exit::OK)
        }
        BaselineAction::Check {
            profile,
            input,
            z_threshold,
            out,
        } => {
            let profile = load_profile(profile)?;
            let z = z_threshold.or(config.z_threshold).unwrap_or(DEFAULT_Z_THRESHOLD);
            let mut doc = MetricReportDocument::load(input)?;
            let mut flags = Vec::new();
            for entry in &doc.entries {
                for mut flag in baseline_check(&profile, &entry.values(), z)? {
                    flag.z = flag.z.map(sig10);
                    flags.push(EntryFlag {
                        id: entry.id.clone(),
                        flag,
                    });
                }
            }
            doc.flags = flags;
            emit(out.as_deref(), &to_json(&doc))?;
            Ok(if doc.flags.is_empty() { exit::OK } else { exit::FLAGGED })
        }
    }
}
