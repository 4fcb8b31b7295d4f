//! The `ordeval` command line.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ordeval_core::meta::MetaConfig;
use ordeval_core::metrics::{MetricId, MetricParams};
use ordeval_core::properties::AuditOptions;
use ordeval_core::synth::{ratio_grid, SynthConfig};
use ordeval_core::{EmptyClassPolicy, LabeledDataset, OrdinalScale};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::{audit, metaeval, render, suite, tsv};

/// Exit code of `audit --expect-table1` when verdicts differ from the
/// reference table.
pub const EXIT_TABLE_MISMATCH: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "ordeval", version, about = "Evaluate and meta-evaluate ordinal classification metrics")]
pub struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score system outputs against a gold standard.
    Evaluate(EvaluateArgs),
    /// Search for violations of ordinal invariance, monotonicity and imbalance.
    Audit(AuditArgs),
    /// Generate a synthetic benchmark suite.
    Synth(SynthArgs),
    /// Coverage and robustness of metrics on a benchmark suite.
    Metaeval(MetaevalArgs),
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Gold standard TSV (`item_id<TAB>label`).
    #[arg(long)]
    pub gold: PathBuf,
    /// System output as `name=path` (or just `path`, named after the file).
    #[arg(long = "system", required = true)]
    pub systems: Vec<String>,
    /// Class labels in increasing order, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "scale_file")]
    pub classes: Option<Vec<String>>,
    /// File with one class label per line, lowest first.
    #[arg(long)]
    pub scale_file: Option<PathBuf>,
    /// Metric ids, comma separated, or `all`.
    #[arg(long, default_value = "cem_ord")]
    pub metrics: String,
    /// Metric parameter `key=value` (repeatable).
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Do not print the table to stderr.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value = "all")]
    pub metrics: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Exit with status 1 unless every verdict matches the reference table.
    #[arg(long)]
    pub expect_table1: bool,
    /// Diagnostic: let generated gold standards leave classes empty.
    #[arg(long)]
    pub allow_empty_gold_classes: bool,
    #[arg(long = "param")]
    pub params: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Target directory.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub test_cases: Option<usize>,
    #[arg(long)]
    pub docs: Option<usize>,
    /// Number of classes.
    #[arg(long)]
    pub classes: Option<usize>,
    /// Mean of the gold label distribution.
    #[arg(long)]
    pub mean: Option<f64>,
    /// Standard deviation range `low:high`.
    #[arg(long)]
    pub sigma: Option<String>,
    /// Error ratios as `lo:hi:step` or a comma separated list.
    #[arg(long)]
    pub ratios: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MetaevalArgs {
    /// Suite directory.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Reference metrics for the unanimous improvement ratio.
    #[arg(long, default_value = "accuracy,kendall_tau_a,mutual_information")]
    pub reference: String,
    #[arg(long, default_value = "all")]
    pub metrics: String,
    /// Class labels, for suites without a manifest.
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<String>>,
    /// Empty gold classes in CEM: `allow` or `reject`.
    #[arg(long, default_value = "allow")]
    pub empty_classes: String,
    #[arg(long = "param")]
    pub params: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub quiet: bool,
}

pub fn parse_metrics(list: &str) -> Result<Vec<MetricId>> {
    if list.trim() == "all" {
        return Ok(MetricId::ALL.to_vec());
    }
    let mut metrics = Vec::new();
    for id in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let m = MetricId::parse(id)?;
        if !metrics.contains(&m) {
            metrics.push(m);
        }
    }
    Ok(metrics)
}

fn apply_params(params: &mut MetricParams, pairs: &[String]) -> Result<()> {
    for pair in pairs {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("--param expects key=value, got `{pair}`")))?;
        params.set(k.trim(), v.trim())?;
    }
    Ok(())
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn split_system(arg: &str) -> (String, PathBuf) {
    match arg.split_once('=') {
        Some((name, path)) if !name.is_empty() => (name.to_string(), PathBuf::from(path)),
        _ => {
            let path = PathBuf::from(arg);
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| arg.to_string());
            (name, path)
        }
    }
}

pub fn evaluate(args: &EvaluateArgs) -> Result<i32> {
    let labels = match (&args.classes, &args.scale_file) {
        (Some(c), _) => c.clone(),
        (None, Some(path)) => tsv::read_scale_file(path)?,
        (None, None) => return Err(Error::Usage("give the classes with --classes or --scale-file".into())),
    };
    let scale = OrdinalScale::new(labels)?;
    let metrics = parse_metrics(&args.metrics)?;
    let mut params = MetricParams::default();
    apply_params(&mut params, &args.params)?;

    let mut dataset = LabeledDataset::new(scale, tsv::read_labels(&args.gold)?)?;
    for arg in &args.systems {
        let (name, path) = split_system(arg);
        dataset = dataset.with_system(name, tsv::read_labels(&path)?)?;
    }
    let name = args
        .gold
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let reports = ordeval_core::report::evaluate(&dataset, &name, &metrics, &params)?;
    if !args.quiet {
        eprint!("{}", render::evaluation_table(&reports));
    }
    emit(&reports, args.out.as_deref())?;
    Ok(0)
}

pub fn run_audit(args: &AuditArgs) -> Result<i32> {
    let metrics = parse_metrics(&args.metrics)?;
    let mut params = MetricParams::default();
    apply_params(&mut params, &args.params)?;
    let options = AuditOptions {
        params,
        allow_empty_gold_classes: args.allow_empty_gold_classes,
    };
    let report = audit::audit(&metrics, args.trials, args.seed, &options);
    if !args.quiet {
        eprint!("{}", render::audit_table(&report));
    }
    emit(&report, args.out.as_deref())?;
    if args.expect_table1 && !report.table1_mismatches.is_empty() {
        for m in &report.table1_mismatches {
            log::error!(
                "{} {}: expected {}, found {:?}",
                m.metric,
                m.property.as_str(),
                if m.expected_satisfied { "no violation" } else { "a violation" },
                m.verdict
            );
        }
        return Ok(EXIT_TABLE_MISMATCH);
    }
    Ok(0)
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Usage(format!("{what}: `{s}` is not a number")))
}

fn parse_ratios(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => Ok(ratio_grid(
            parse_f64(lo, "--ratios")?,
            parse_f64(hi, "--ratios")?,
            parse_f64(step, "--ratios")?,
        )?),
        [list] => list.split(',').map(|r| parse_f64(r, "--ratios")).collect(),
        _ => Err(Error::Usage(format!("--ratios expects lo:hi:step or a list, got `{spec}`"))),
    }
}

pub fn synth_config(args: &SynthArgs) -> Result<SynthConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&text).map_err(|source| Error::Json {
                path: path.clone(),
                source,
            })?
        }
        None => SynthConfig::default(),
    };
    if let Some(v) = args.test_cases {
        config.test_cases = v;
    }
    if let Some(v) = args.docs {
        config.docs_per_case = v;
    }
    if let Some(v) = args.classes {
        config.num_classes = v;
    }
    if let Some(v) = args.mean {
        config.gold_mean = v;
    }
    if let Some(s) = &args.sigma {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| Error::Usage(format!("--sigma expects low:high, got `{s}`")))?;
        config.sigma_range = [parse_f64(lo, "--sigma")?, parse_f64(hi, "--sigma")?];
    }
    if let Some(r) = &args.ratios {
        config.error_ratios = parse_ratios(r)?;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    config.validate()?;
    Ok(config)
}

pub fn synth(args: &SynthArgs) -> Result<i32> {
    let config = synth_config(args)?;
    let manifest = suite::write_suite(&config, &args.out)?;
    log::info!(
        "wrote {} cases x {} systems to {}",
        manifest.cases.len(),
        manifest.systems.len(),
        args.out.display()
    );
    Ok(0)
}

pub fn run_metaeval(args: &MetaevalArgs) -> Result<i32> {
    let config = MetaConfig {
        reference: parse_metrics(&args.reference)?,
        metrics: parse_metrics(&args.metrics)?,
    };
    let mut params = MetricParams::default();
    params.set("empty_classes", &args.empty_classes)?;
    apply_params(&mut params, &args.params)?;
    if params.empty_classes == EmptyClassPolicy::Allow {
        log::info!("CEM scores gold standards with empty classes (empty_classes=allow)");
    }
    let suite = suite::load_suite(&args.input, args.classes.clone())?;
    let output = metaeval::metaeval(&suite, &config, &params)?;
    if !args.quiet {
        eprint!("{}", render::meta_table(&output.report));
    }
    emit(&output, args.out.as_deref())?;
    Ok(0)
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Evaluate(a) => evaluate(a),
        Command::Audit(a) => run_audit(a),
        Command::Synth(a) => synth(a),
        Command::Metaeval(a) => run_metaeval(a),
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main_entry() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ORDEVAL_LOG", "warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
