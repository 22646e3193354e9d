//! `reqplex`: extract requirement graphs, compute complexity metrics, relate
//! them to effort data and gate on historical baselines.
//!
//! Exit codes: 0 success, 1 baseline flags raised, 2 usage, 3 validation,
//! 4 domain/numeric, 5 I/O. Every failure prints one JSON line on stderr.

mod analyze;
mod baseline;
mod config;
mod correlate;
mod error;
mod extract;
mod output;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::error::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "reqplex", version, about = "Structural complexity metrics for requirement graphs")]
struct Cli {
    /// TOML file providing defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract the layered requirement graph from a text document.
    Extract(ExtractArgs),
    /// Compute metrics for graph or task files.
    Analyze(AnalyzeArgs),
    /// Correlate metric columns with an effort column.
    Correlate(CorrelateArgs),
    /// Build or check a baseline profile.
    Baseline {
        #[command(subcommand)]
        action: BaselineAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Molecule,
    Integration,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Requirements document (UTF-8 text).
    #[arg(long)]
    pub input: PathBuf,
    /// Newline-separated entity terms.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Layers to project (comma separated: hierarchy, reference, entity_mention).
    #[arg(long, value_delimiter = ',')]
    pub layers: Option<Vec<String>>,
    /// Replace entity nodes by cliques over the requirements that mention them.
    #[arg(long)]
    pub collapse_entities: bool,
    /// Emit an integration task (hierarchy trees as components) with this id.
    #[arg(long)]
    pub task_id: Option<String>,
    /// Graph (or task) output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Extraction report path; defaults to `<out>.report.json` when `--out` is set.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Graph JSON, edge list, task JSON, or a directory of them.
    #[arg(long)]
    pub input: PathBuf,
    /// Metric names to report (comma separated); default all.
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub level: Option<Level>,
    /// Unweighted matrices: unit edge weights and no alpha diagonal.
    #[arg(long)]
    pub topology_only: bool,
    /// Integration metrics on the whole assembly or as assembly-minus-parts.
    #[arg(long)]
    pub integration_mode: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// Metrics CSV (one row per task).
    #[arg(long)]
    pub input: PathBuf,
    /// Effort CSV (one row per task).
    #[arg(long)]
    pub effort: PathBuf,
    #[arg(long, default_value = "task_id")]
    pub join_key: String,
    /// Effort column; defaults to the only non-key column.
    #[arg(long)]
    pub effort_column: Option<String>,
    /// Metric columns to correlate (comma separated); default all numeric.
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub level: Option<Level>,
    /// Confidence level of the Fisher interval.
    #[arg(long)]
    pub ci: Option<f64>,
    /// Polynomial fits to run (comma separated: linear, quadratic).
    #[arg(long, value_delimiter = ',')]
    pub regression: Option<Vec<String>>,
    /// Kolmogorov-Smirnov normality test of the effort column.
    #[arg(long)]
    pub ks: bool,
    /// Plottable CSV of observed pairs and fitted curves.
    #[arg(long)]
    pub plot_csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BaselineAction {
    /// Build a profile from analyze reports.
    Build {
        /// Report files or directories (repeatable).
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Check every entry of an analyze report against a profile.
    Check {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        z_threshold: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Extract(args) => extract::run(&args, &config),
        Command::Analyze(args) => analyze::run(&args, &config),
        Command::Correlate(args) => correlate::run(&args, &config),
        Command::Baseline { action } => baseline::run(&action, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::from(exit::OK as u8);
            }
            let err = CliError::usage(e.to_string().lines().next().unwrap_or("usage error"));
            eprintln!("{}", err.record());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{}", err.record());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
