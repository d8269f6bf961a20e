//! Command-line entry points.
//!
//! Exit codes: 0 success, 1 `check` found the full sensor set unobservable,
//! 2 bad input (arguments, model file), 3 too many sensors for exact
//! enumeration without `--sample`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use obshap::gramian::default_observability_tolerance;
use obshap::{
    evaluate, is_observable, per_sensor_gramians, scenarios, shapley_exact, shapley_sampled, verify_axioms, Coalition,
    CoreError, Model64, ValueFunctionKind,
};
use thiserror::Error;

use crate::document::{parse_document, render_model, ParseError};
use crate::report::{yes_no, ReportDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNOBSERVABLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "obshap", version, about = "Shapley attribution of sensor contributions to observability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Attribute the degree of observability to each sensor.
    Analyze(AnalyzeArgs),
    /// Report observability of the full sensor set and of each sensor alone.
    Check(CheckArgs),
    /// Write the two built-in scenario models as JSON files.
    EmitScenarios(EmitArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelSource {
    /// Path to a JSON model file.
    #[arg(long, required_unless_present = "scenario", conflicts_with = "scenario")]
    pub model: Option<PathBuf>,
    /// Use a built-in scenario instead of a file.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub scenario: Option<u8>,
    /// Override the number of horizon samples.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: Option<u64>,
    /// Observability threshold on the minimum Gramian eigenvalue.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Trace,
    MinEig,
}

impl From<MetricArg> for ValueFunctionKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Trace => ValueFunctionKind::Trace,
            MetricArg::MinEig => ValueFunctionKind::MinEigenvalue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: ModelSource,
    #[arg(long, value_enum, default_value = "min-eig")]
    pub metric: MetricArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Estimate Shapley values from this many random sensor orderings.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub sample: Option<u64>,
    /// Seed for `--sample`.
    #[arg(long, default_value_t = 0, requires = "sample")]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: ModelSource,
}

#[derive(Debug, Clone, Args)]
pub struct EmitArgs {
    /// Directory to write `scenario1.json` and `scenario2.json` into.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::EnumerationCapExceeded { .. }) => EXIT_CAP,
            _ => EXIT_INPUT,
        }
    }
}

pub struct LoadedModel {
    pub name: String,
    pub model: Model64,
}

pub fn load_model(source: &ModelSource) -> Result<LoadedModel, CliError> {
    let mut loaded = match (&source.model, source.scenario) {
        (_, Some(id)) => LoadedModel {
            name: format!("scenario{id}"),
            model: scenarios::scenario(id).ok_or_else(|| CliError::Input(format!("unknown scenario {id}")))?,
        },
        (Some(path), None) => load_file(path)?,
        (None, None) => return Err(CliError::Input("one of --model or --scenario is required".into())),
    };
    if let Some(h) = source.horizon {
        loaded.model = loaded.model.with_horizon(h as usize)?;
    }
    if let Some(t) = source.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("--tolerance must be a positive number, got {t}")));
        }
    }
    Ok(loaded)
}

fn load_file(path: &Path) -> Result<LoadedModel, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let parse_err = |source| CliError::Parse {
        path: shown.clone(),
        source,
    };
    let doc = parse_document(&text).map_err(parse_err)?;
    let model = doc.to_model().map_err(parse_err)?;
    let name = doc.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map_or_else(|| shown.clone(), |s| s.to_string_lossy().into_owned())
    });
    Ok(LoadedModel { name, model })
}

/// Runs `analyze` and returns the rendered report.
pub fn run_analyze(args: &AnalyzeArgs) -> Result<String, CliError> {
    let LoadedModel { name, model } = load_model(&args.source)?;
    let kind: ValueFunctionKind = args.metric.into();

    let bank = per_sensor_gramians(&model)?;
    let full = bank.coalition_gramian(&Coalition::full(model.sensor_count()))?;
    let observable = is_observable(&full, args.source.tolerance)?;

    let (result, axioms) = match args.sample {
        Some(n) => (shapley_sampled(&model, kind, n, args.seed)?, None),
        None => {
            let r = shapley_exact(&model, kind)?;
            let a = verify_axioms(&model, kind, &r)?;
            (r, Some(a))
        }
    };
    let doc = ReportDocument::new(&name, &result, observable, axioms.as_ref());
    Ok(match args.format {
        Format::Json => doc.to_json(),
        Format::Table => doc.to_table(kind.label()),
    })
}

pub struct CheckOutcome {
    pub text: String,
    pub observable: bool,
}

/// Observability verdicts for the full coalition and every singleton.
pub fn run_check(args: &CheckArgs) -> Result<CheckOutcome, CliError> {
    let LoadedModel { name, model } = load_model(&args.source)?;
    let bank = per_sensor_gramians(&model)?;
    let p = model.sensor_count();

    let mut rows: Vec<(String, Coalition)> = vec![("full".into(), Coalition::full(p))];
    rows.extend(model.sensor_names().enumerate().map(|(i, n)| (n.to_owned(), Coalition::singleton(i))));

    let mut text = String::new();
    let _ = writeln!(text, "model: {name}  horizon_samples: {}", model.horizon_samples());
    let name_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(9);
    let _ = writeln!(
        text,
        "{:<name_w$}  {:<10}  {:>18}  {:>18}  {:>12}",
        "coalition", "observable", "min eigenvalue", "trace", "threshold"
    );
    let mut full_observable = false;
    for (k, (label, c)) in rows.iter().enumerate() {
        let g = bank.coalition_gramian(c)?;
        let e = g.eigenvalues()?;
        let tol = args
            .source
            .tolerance
            .unwrap_or_else(|| default_observability_tolerance(e[e.len() - 1]));
        let obs = is_observable(&g, Some(tol))?;
        if k == 0 {
            full_observable = obs;
        }
        let _ = writeln!(
            text,
            "{:<name_w$}  {:<10}  {:>18.6}  {:>18.6}  {:>12.3e}",
            label,
            yes_no(obs),
            evaluate(ValueFunctionKind::MinEigenvalue, &g)?,
            evaluate(ValueFunctionKind::Trace, &g)?,
            tol
        );
    }
    Ok(CheckOutcome {
        text,
        observable: full_observable,
    })
}

/// Writes `scenario1.json` and `scenario2.json` into `dir`.
pub fn emit_scenarios(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut written = Vec::new();
    for id in [1u8, 2] {
        let name = format!("scenario{id}");
        let path = dir.join(format!("{name}.json"));
        let model = scenarios::scenario::<f64>(id).expect("built-in scenario");
        std::fs::write(&path, render_model(Some(&name), &model)).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}

/// Parses `args` (including the program name) and runs the command, writing
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };

    let outcome = match &cli.command {
        Command::Analyze(a) => run_analyze(a).map(|text| (text, EXIT_OK)),
        Command::Check(c) => run_check(c).map(|o| {
            let code = if o.observable { EXIT_OK } else { EXIT_UNOBSERVABLE };
            (o.text, code)
        }),
        Command::EmitScenarios(e) => emit_scenarios(&e.out_dir).map(|paths| {
            let text = paths.iter().map(|p| format!("wrote {}\n", p.display())).collect();
            (text, EXIT_OK)
        }),
    };
    match outcome {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
