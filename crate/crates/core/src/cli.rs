//! The `dismetrics` command line: `synth`, `eval` and `report`.
//!
//! Exit codes: 0 success, 1 usage, 2 input or data error, 3 solver failure.
//! Settings may come from a TOML file given by `--config`; flags override it.
//! `DISMETRICS_THREADS` caps the worker pool (`0` runs sequentially).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::Error;
use crate::grid::{format_f64, load_dataset, save_dataset, Dataset};
use crate::metrics::suite::{
    combinations, evaluate_target, two_decimals, Granularity, SuiteReport,
};
use crate::metrics::MetricKind;
use crate::premetric::Aggregator;
use crate::synth::{encode_all, encode_with, generate, EncoderKind, GeneratorSpec, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub const REPORT_FILE: &str = "report.json";
pub const RECORDS_FILE: &str = "records.csv";
pub const TABLE_FILE: &str = "table.csv";
pub const THREADS_ENV: &str = "DISMETRICS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dismetrics", version, about = "Disentanglement metrics for sampled encoders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate synthetic datasets from the reference encoders.
    Synth(SynthArgs),
    /// Score datasets (or freshly synthesized encoders) and write reports.
    Eval(EvalArgs),
    /// Render a stored report as a table.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML file with default settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Global multiplier for factor values and codes.
    #[arg(long)]
    scale: Option<f64>,
    /// Encoder name, or `all`.
    #[arg(long)]
    encoder: Option<String>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    common: Common,
    /// Output directory; with several encoders each gets a subdirectory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Dataset directories. Without any, the reference encoders are synthesized in memory.
    datasets: Vec<PathBuf>,
    #[command(flatten)]
    common: Common,
    /// Comma-separated metric names.
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<String>>,
    /// Comma-separated aggregator names.
    #[arg(long, value_delimiter = ',')]
    agg: Option<Vec<String>>,
    #[arg(long)]
    granularity: Option<String>,
    /// Directory for report.json, records.csv and table.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    #[default]
    Markdown,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// A report.json file, or a directory containing one.
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Write the rendering to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Settings readable from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    scale: Option<f64>,
    encoder: Option<String>,
    out: Option<PathBuf>,
    datasets: Option<Vec<PathBuf>>,
    metrics: Option<Vec<String>>,
    agg: Option<Vec<String>>,
    granularity: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| dispatch(cli.command)),
        Ok(None) => dispatch(cli.command),
        Err(f) => Err(f),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            if e.is_solver_failure() {
                EXIT_SOLVER
            } else {
                EXIT_DATA
            }
        }
    }
}

fn thread_pool() -> CliResult<Option<rayon::ThreadPool>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build()
        .map(Some)
        .map_err(|e| Failure::Usage(format!("cannot start {n} worker threads: {e}")))
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Synth(args) => synth(args),
        Command::Eval(args) => eval(args),
        Command::Report(args) => report(args),
    }
}

fn load_config(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_each<T: std::str::FromStr<Err = String>>(items: &[String]) -> CliResult<Vec<T>> {
    items.iter().map(|s| s.trim().parse().map_err(Failure::Usage)).collect()
}

fn encoders(name: Option<&str>) -> CliResult<Vec<EncoderKind>> {
    match name.unwrap_or("all") {
        "all" => Ok(EncoderKind::ALL.to_vec()),
        other => Ok(vec![other.parse().map_err(Failure::Usage)?]),
    }
}

fn generator_spec(common: &Common, config: &FileConfig) -> CliResult<GeneratorSpec> {
    let scale = common.scale.or(config.scale).unwrap_or(1.0);
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Failure::Usage(format!("--scale must be a positive number, got {scale}")));
    }
    Ok(GeneratorSpec {
        seed: common.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
        scale,
        ..GeneratorSpec::default()
    })
}

fn synthesize(common: &Common, config: &FileConfig) -> CliResult<Vec<Dataset>> {
    let kinds = encoders(common.encoder.as_deref().or(config.encoder.as_deref()))?;
    let spec = generator_spec(common, config)?;
    if kinds.len() == EncoderKind::ALL.len() {
        return Ok(encode_all(&spec)?);
    }
    let generator = generate(&spec)?;
    Ok(kinds
        .into_iter()
        .map(|k| encode_with(k, &spec, &generator))
        .collect::<crate::Result<_>>()?)
}

fn synth(args: SynthArgs) -> CliResult<()> {
    let config = load_config(args.common.config.as_deref())?;
    let out = args
        .out
        .or(config.out.clone())
        .ok_or_else(|| Failure::Usage("synth needs --out".into()))?;
    let single = args.common.encoder.as_deref().or(config.encoder.as_deref()).is_some_and(|e| e != "all");
    let datasets = synthesize(&args.common, &config)?;
    for ds in &datasets {
        let dir = if single { out.clone() } else { out.join(&ds.id) };
        save_dataset(ds, &dir)?;
        println!("{}: {} rows -> {}", ds.id, ds.grid().len(), dir.display());
    }
    Ok(())
}

fn eval(args: EvalArgs) -> CliResult<()> {
    let config = load_config(args.common.config.as_deref())?;
    let metric_names = args
        .metrics
        .or(config.metrics.clone())
        .unwrap_or_else(|| MetricKind::ALL.iter().map(|m| m.name().to_owned()).collect());
    let metrics: Vec<MetricKind> = parse_each(&metric_names)?;
    if metrics.is_empty() {
        return Err(Failure::Usage("the metric list is empty".into()));
    }
    let agg_names = args.agg.or(config.agg.clone()).unwrap_or_else(|| {
        ["max", "mean", "second_moment"].map(str::to_owned).to_vec()
    });
    let aggs: Vec<Aggregator> = parse_each(&agg_names)?;
    let combos = combinations(&metrics, &aggs);
    if combos.is_empty() {
        return Err(Failure::Usage(
            "no requested aggregator applies to the requested metrics".into(),
        ));
    }
    let granularity: Granularity = match args.granularity.or(config.granularity.clone()) {
        Some(g) => g.parse().map_err(Failure::Usage)?,
        None => Granularity::Overall,
    };

    let dirs = if args.datasets.is_empty() {
        config.datasets.clone().unwrap_or_default()
    } else {
        args.datasets
    };
    let datasets = if dirs.is_empty() {
        synthesize(&args.common, &config)?
    } else {
        dirs.iter().map(load_dataset).collect::<crate::Result<Vec<_>>>()?
    };

    let targets = datasets
        .par_iter()
        .map(|ds| evaluate_target(&ds.id, ds.provenance.clone(), &ds.table, &combos))
        .collect::<crate::Result<Vec<_>>>()?;
    let suite = SuiteReport { granularity, targets };
    let table = suite.wide_table();

    if let Some(out) = args.out.or(config.out.clone()) {
        fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
        let json = serde_json::to_string_pretty(&suite)
            .map_err(|e| Failure::Usage(format!("cannot encode report: {e}")))?;
        write_file(&out.join(REPORT_FILE), &(json + "\n"))?;
        write_file(&out.join(RECORDS_FILE), &suite.records_csv())?;
        write_file(&out.join(TABLE_FILE), &table.to_csv(format_f64))?;
        println!(
            "{} targets x {} scores -> {}",
            suite.targets.len(),
            combos.len(),
            out.display()
        );
    } else {
        print!("{}", table.to_markdown(two_decimals));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e).into())
}

/// Reads a suite report from a `report.json` file or a directory holding one.
pub fn read_report(path: &Path) -> crate::Result<SuiteReport> {
    let file = if path.is_dir() { path.join(REPORT_FILE) } else { path.to_path_buf() };
    let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
    serde_json::from_str(&text).map_err(|e| Error::schema(&file, e.to_string()))
}

fn report(args: ReportArgs) -> CliResult<()> {
    let suite = read_report(&args.path)?;
    let table = suite.wide_table();
    let rendered = match args.format {
        Format::Csv => table.to_csv(two_decimals),
        Format::Markdown => table.to_markdown(two_decimals),
    };
    match args.out {
        Some(path) => write_file(&path, &rendered),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .map_err(|e| Error::io("<stdout>", e).into())
        }
    }
}
