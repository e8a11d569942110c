//! Command-line front end: `gen`, `fit`, `predict`, `eval` and `inspect`.
//!
//! Exit codes are 0 on success, 2 for usage errors, 3 for data or format
//! errors and 4 for numeric failures (singular systems, exhausted precision).

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use crate::dataset::{generate, Dataset, Noise, Partition, TargetFamily, TargetSpec, DATA_HEADER};
use crate::embedding::PointND;
use crate::error::Error;
use crate::model::{RegressionModel, MODEL_HEADER};
use crate::padic::{PAdic, Prime};
use crate::training::{fit_exact, fit_stochastic, format_rational, FitReport, TrainerConfig};

#[derive(Debug, Parser)]
#[command(name = "padic-regress", version, about = "p-adic polynomial regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset from a planted target.
    Gen(GenArgs),
    /// Fit a model to the training split of a dataset.
    Fit(FitArgs),
    /// Evaluate a model on a dataset or a single point.
    Predict(PredictArgs),
    /// Report exact train and validation losses of a model.
    Eval(EvalArgs),
    /// Summarize a dataset or model file.
    Inspect(InspectArgs),
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Number of records.
    #[arg(long = "N")]
    pub count: usize,
    /// Digits of precision per value.
    #[arg(long = "M", default_value_t = 32)]
    pub precision: i64,
    /// `mahler:<w0>,<w1>,...`, `poly:<terms>` or `digitmap:<t0>,...`.
    #[arg(long)]
    pub target: String,
    /// Label noise `<e>:<q>`: add `u p^e` with probability `q`.
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Training fraction, `a/b` or decimal.
    #[arg(long = "train-frac", default_value = "1")]
    pub train_frac: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Stochastic,
}

#[derive(Debug, clap::Args)]
pub struct FitArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Series degree; exact mode requires `N_train - 1`.
    #[arg(long = "K")]
    pub degree: Option<usize>,
    /// Work at `M` digits instead of the file precision.
    #[arg(long = "M")]
    pub precision: Option<i64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Extra digits carried by the design matrix.
    #[arg(long, default_value_t = 16)]
    pub guard: i64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub beta0: f64,
    #[arg(long = "beta-growth", default_value_t = 1.001)]
    pub beta_growth: f64,
    #[arg(long = "radius-q", default_value_t = 0.5)]
    pub radius_q: f64,
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Start the walk from an exact fit of the first `K + 1` records.
    #[arg(long = "warm-start")]
    pub warm_start: bool,
    /// Model output path.
    #[arg(long, alias = "model")]
    pub out: Option<PathBuf>,
    /// Also write the report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Best-so-far loss as `step,num,den` CSV.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Dataset whose inputs are evaluated.
    #[arg(long = "in", conflicts_with = "x")]
    pub input: Option<PathBuf>,
    /// A single point: encoded coordinates separated by `;`.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "all")]
    pub partition: Partition,
    #[arg(long = "M")]
    pub precision: Option<i64>,
}

#[derive(Debug, clap::Args)]
pub struct InspectArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotPrime(_)
            | Error::PrimeTooLarge(_)
            | Error::InvalidPrecision(_)
            | Error::InvalidConfig(_)
            | Error::DegreeMismatch { .. } => 2,
            Error::Parse { .. }
            | Error::PrimeMismatch { .. }
            | Error::DimensionMismatch { .. }
            | Error::EmptyPartition(_) => 3,
            Error::DivisionByZero
            | Error::Singular { .. }
            | Error::InsufficientPrecision { .. }
            | Error::NotIntegral { .. }
            | Error::InconsistentSystem { .. }
            | Error::LatticeTooLarge { .. } => 4,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path, e: Error) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", path.display(), err.message);
    err
}

fn load_dataset(path: &Path) -> CliResult<Dataset> {
    Dataset::from_text(&read(path)?).map_err(|e| with_path(path, e))
}

fn load_model(path: &Path) -> CliResult<RegressionModel> {
    RegressionModel::from_text(&read(path)?).map_err(|e| with_path(path, e))
}

/// Parses `a/b` or a decimal such as `0.75`.
pub fn parse_fraction(text: &str) -> std::result::Result<Ratio<u64>, String> {
    let text = text.trim();
    let bad = || format!("bad fraction `{text}`");
    if let Some((a, b)) = text.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
    let scale = 10u64.pow(frac.len() as u32);
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    Ok(Ratio::new(whole * scale + frac, scale))
}

fn parse_noise(text: &str) -> std::result::Result<Noise, String> {
    let (e, q) = text
        .split_once(':')
        .ok_or_else(|| format!("noise must be `<e>:<q>`, got `{text}`"))?;
    Ok(Noise {
        exponent: e.trim().parse().map_err(|_| format!("bad noise exponent `{e}`"))?,
        probability: q.trim().parse().map_err(|_| format!("bad noise probability `{q}`"))?,
    })
}

fn check_overrides(data: &Dataset, p: Option<u64>, n: Option<usize>) -> CliResult<()> {
    if let Some(p) = p {
        if p != data.prime().get() as u64 {
            return Err(Error::PrimeMismatch {
                left: p as u32,
                right: data.prime().get(),
            }
            .into());
        }
    }
    if let Some(n) = n {
        if n != data.dimension() {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: data.dimension(),
            }
            .into());
        }
    }
    Ok(())
}

fn at_precision(data: Dataset, precision: Option<i64>) -> CliResult<Dataset> {
    match precision {
        None => Ok(data),
        Some(m) if m > data.precision() => Err(CliError::usage(format!(
            "--M {m} exceeds the file precision {}",
            data.precision()
        ))),
        Some(m) => Ok(data.with_precision(m)?),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::data(format!("writing output: {e}")))
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let prime = Prime::new(args.p)?;
    let family: TargetFamily = args.target.parse().map_err(CliError::usage)?;
    let mut spec = TargetSpec::new(family);
    if let Some(noise) = &args.noise {
        spec = spec.with_noise(parse_noise(noise).map_err(CliError::usage)?);
    }
    let fraction = parse_fraction(&args.train_frac).map_err(CliError::usage)?;
    let data = generate(&spec, args.n, args.count, prime, args.precision, args.seed)?;
    let data = if data.is_empty() {
        data
    } else {
        data.split(fraction, args.seed)?
    };
    let _ = writeln!(
        err,
        "generated {} records ({} train, {} val): {spec}",
        data.len(),
        data.count(Partition::Train),
        data.count(Partition::Validation)
    );
    match &args.out {
        Some(path) => write(path, &data.to_text()),
        None => emit(out, &data.to_text()),
    }
}

fn cmd_fit(args: FitArgs, out: &mut dyn Write) -> CliResult<()> {
    let data = load_dataset(&args.input)?;
    check_overrides(&data, args.p, args.n)?;
    let data = at_precision(data, args.precision)?;
    let n_train = data.count(Partition::Train);
    if n_train == 0 {
        return Err(Error::EmptyPartition(Partition::Train.to_string()).into());
    }
    let report: FitReport = match args.mode {
        Mode::Exact => {
            if let Some(k) = args.degree {
                if k + 1 != n_train {
                    return Err(Error::DegreeMismatch {
                        degree: k,
                        records: n_train,
                    }
                    .into());
                }
            }
            fit_exact(&data, args.guard)?
        }
        Mode::Stochastic => {
            let degree = args
                .degree
                .ok_or_else(|| CliError::usage("stochastic mode needs --K"))?;
            let cfg = TrainerConfig {
                degree,
                steps: args.steps,
                beta0: args.beta0,
                beta_growth: args.beta_growth,
                radius_q: args.radius_q,
                seed: args.seed,
                chains: args.chains,
                warm_start: args.warm_start,
                guard_digits: args.guard,
            };
            fit_stochastic(&data, &cfg)?
        }
    };
    if let Some(path) = &args.out {
        write(path, &report.model.to_text())?;
    }
    if let Some(path) = &args.trajectory {
        write(path, &report.trajectory_csv())?;
    }
    let text = report.to_text();
    if let Some(path) = &args.report {
        write(path, &text)?;
    }
    emit(out, &text)
}

fn parse_point(text: &str, model: &RegressionModel) -> CliResult<PointND> {
    let prime = model.prime();
    let coords = text
        .split(';')
        .map(|f| {
            let v = PAdic::parse_encoded(f, prime).map_err(CliError::data)?;
            Ok(if v.is_exact_zero() {
                PAdic::zero_at(prime, model.precision())
            } else {
                v
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(PointND::new(prime, coords)?)
}

fn cmd_predict(args: PredictArgs, out: &mut dyn Write) -> CliResult<()> {
    let model = load_model(&args.model)?;
    let points: Vec<PointND> = match (&args.input, &args.x) {
        (Some(path), None) => {
            let data = load_dataset(path)?;
            check_compatible(&model, &data)?;
            data.records().iter().map(|r| r.x.clone()).collect()
        }
        (None, Some(x)) => vec![parse_point(x, &model)?],
        _ => return Err(CliError::usage("predict needs exactly one of --in or --x")),
    };
    let mut text = String::new();
    for x in &points {
        let y = model.predict(x)?.truncate(model.precision());
        let _ = writeln!(text, "{y}");
    }
    match &args.out {
        Some(path) => write(path, &text),
        None => emit(out, &text),
    }
}

fn check_compatible(model: &RegressionModel, data: &Dataset) -> CliResult<()> {
    check_overrides(data, Some(model.prime().get() as u64), Some(model.dimension()))
}

fn loss_line(model: &RegressionModel, data: &Dataset, partition: Partition) -> CliResult<String> {
    let count = data.count(partition);
    if count == 0 {
        return Ok(format!("loss {partition} none N=0"));
    }
    let loss = model.loss(data, partition)?;
    let kind = if loss.is_bound() { "bound" } else { "exact" };
    Ok(format!(
        "loss {partition} {} {kind} upper={} N={count}",
        format_rational(loss.value()),
        format_rational(loss.upper())
    ))
}

fn cmd_eval(args: EvalArgs, out: &mut dyn Write) -> CliResult<()> {
    let model = load_model(&args.model)?;
    let data = at_precision(load_dataset(&args.input)?, args.precision)?;
    check_compatible(&model, &data)?;
    let parts: &[Partition] = match args.partition {
        Partition::All => &[Partition::Train, Partition::Validation],
        Partition::Train => &[Partition::Train],
        Partition::Validation => &[Partition::Validation],
    };
    let mut text = String::new();
    for &part in parts {
        if args.partition != Partition::All && data.count(part) == 0 {
            return Err(Error::EmptyPartition(part.to_string()).into());
        }
        let _ = writeln!(text, "{}", loss_line(&model, &data, part)?);
    }
    let _ = writeln!(text, "integral={}", model.is_integral());
    emit(out, &text)
}

fn cmd_inspect(args: InspectArgs, out: &mut dyn Write) -> CliResult<()> {
    let text = read(&args.input)?;
    let mut summary = String::new();
    if text.starts_with(DATA_HEADER) {
        let data = Dataset::from_text(&text).map_err(|e| with_path(&args.input, e))?;
        let _ = writeln!(summary, "kind=dataset");
        let _ = writeln!(summary, "p={}", data.prime());
        let _ = writeln!(summary, "n={}", data.dimension());
        let _ = writeln!(summary, "M={}", data.precision());
        let _ = writeln!(summary, "N={}", data.len());
        let _ = writeln!(summary, "N_train={}", data.count(Partition::Train));
        let _ = writeln!(summary, "N_val={}", data.count(Partition::Validation));
        for c in data.comments() {
            let _ = writeln!(summary, "comment={}", c.trim());
        }
    } else if text.starts_with(MODEL_HEADER) {
        let model = RegressionModel::from_text(&text).map_err(|e| with_path(&args.input, e))?;
        let _ = writeln!(summary, "kind=model");
        let _ = writeln!(summary, "p={}", model.prime());
        let _ = writeln!(summary, "n={}", model.dimension());
        let _ = writeln!(summary, "K={}", model.degree());
        let _ = writeln!(summary, "M={}", model.precision());
        let _ = writeln!(summary, "integral={}", model.is_integral());
        for (k, w) in model.weights().weights().iter().enumerate() {
            let norm = w.norm();
            let _ = writeln!(summary, "weight {k} {w} norm={}", format_rational(&norm.value()));
        }
    } else {
        return Err(CliError::data(format!(
            "{}: neither a dataset nor a model file",
            args.input.display()
        )));
    }
    emit(out, &summary)
}

/// Runs one parsed command, writing results to `out` and notes to `err`.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a, out, err),
        Command::Fit(a) => cmd_fit(a, out),
        Command::Predict(a) => cmd_predict(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Inspect(a) => cmd_inspect(a, out),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
