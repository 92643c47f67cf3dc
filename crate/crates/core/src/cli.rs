//! Command-line driver. `main_with_args` is the whole program; the binary
//! only forwards `std::env::args_os` and exits with its return value.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::{load_summary, CalibrationSummary};
use crate::error::{Error, Result};
use crate::grover::{
    classical_baseline, theoretical_success, GroverPlan, OracleSpec, OracleStyle, MARKED_PAIRS,
    SINGLE_MARKED,
};
use crate::metrics::{metrics_report, metrics_report_analytic, MetricsReport};
use crate::noise::{from_calibration, from_calibration_file, search_distribution, Durations, NoiseModel};
use crate::sim::{sample_counts_stream, CountsHistogram, Distribution};
use crate::stats::{self, StatSummary, TestResult, VarianceTest};
use crate::tomography::{run_qst_for_plan, QstBackend, Shots};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "grover-lab", version, about = "Grover search simulation, tomography and statistics")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one Grover search and report ASP, SSO and the outcome distribution.
    Run(RunArgs),
    /// Run every reference oracle of a suite and tabulate SSO and ASP.
    Sweep(SweepArgs),
    /// State tomography of the Grover output.
    Qst(QstArgs),
    /// Summary statistics and one-sample tests on a CSV column.
    Stats(StatsArgs),
    /// Summarize a per-qubit calibration CSV.
    Calib(CalibArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum StyleArg {
    #[default]
    Phase,
    Boolean,
}

impl From<StyleArg> for OracleStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Phase => OracleStyle::Phase,
            StyleArg::Boolean => OracleStyle::Boolean,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum BackendArg {
    Ideal,
    NoisyDefault,
    NoisyFile(PathBuf),
}

fn parse_backend(s: &str) -> std::result::Result<BackendArg, String> {
    match s {
        "ideal" => Ok(BackendArg::Ideal),
        "noisy:default" => Ok(BackendArg::NoisyDefault),
        _ => match s.strip_prefix("noisy:") {
            Some(path) if !path.is_empty() => Ok(BackendArg::NoisyFile(path.into())),
            _ => Err("expected ideal, noisy:default or noisy:<file>".into()),
        },
    }
}

impl BackendArg {
    fn tag(&self) -> String {
        match self {
            BackendArg::Ideal => "ideal".into(),
            BackendArg::NoisyDefault => "noisy:default".into(),
            BackendArg::NoisyFile(p) => format!("noisy:{}", p.display()),
        }
    }

    /// A `.csv` file is read as calibration data, anything else as model JSON.
    fn model(&self) -> Result<Option<NoiseModel>> {
        Ok(match self {
            BackendArg::Ideal => None,
            BackendArg::NoisyDefault => Some(NoiseModel::default_calibrated()),
            BackendArg::NoisyFile(p) if p.extension().is_some_and(|e| e == "csv") => {
                Some(from_calibration_file(p, &Durations::default())?)
            }
            BackendArg::NoisyFile(p) => Some(NoiseModel::load(p)?),
        })
    }
}

fn parse_marked(s: &str) -> std::result::Result<OracleSpec, String> {
    OracleSpec::parse_list(s, OracleStyle::Phase).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
struct Execution {
    /// ideal, noisy:default, or noisy:<file> (model JSON or calibration CSV)
    #[arg(long, default_value = "ideal", value_parser = parse_backend)]
    backend: BackendArg,
    /// Required whenever outcomes are sampled.
    #[arg(long, env = "GSA_SEED")]
    seed: Option<u64>,
    /// Oracle + diffusion rounds.
    #[arg(long, default_value_t = 1)]
    iterations: usize,
    #[arg(long, value_enum, default_value_t)]
    style: StyleArg,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Comma-separated marked labels, e.g. 000,111
    #[arg(long, value_parser = parse_marked)]
    marked: OracleSpec,
    /// Shots per repetition; omit for exact probabilities.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    shots: Option<u64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    repetitions: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    exec: Execution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Single,
    Double,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    shots: Option<u64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    repetitions: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[command(flatten)]
    exec: Execution,
}

#[derive(Debug, Args)]
struct QstArgs {
    #[arg(long, value_parser = parse_marked)]
    marked: OracleSpec,
    /// Shots per basis setting (1024, 7779 and 7797 match the reference
    /// runs); omit for exact expectations.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    shots_per_setting: Option<u64>,
    #[command(flatten)]
    exec: Execution,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// CSV file; a non-numeric first row is taken as the header.
    #[arg(long)]
    input: PathBuf,
    /// Column name (needs a header); default is the first column.
    #[arg(long)]
    column: Option<String>,
    /// `mean=<v>` for a t-test, `stdev=<v>` for a chi-square variance test.
    #[arg(long = "test", value_parser = parse_test)]
    tests: Vec<Hypothesis>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Also write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Hypothesis {
    Mean(f64),
    Stdev(f64),
}

fn parse_test(s: &str) -> std::result::Result<Hypothesis, String> {
    let (key, value) = s.split_once('=').ok_or("expected mean=<v> or stdev=<v>")?;
    let v: f64 = value.parse().map_err(|_| format!("{value:?} is not a number"))?;
    match key {
        "mean" => Ok(Hypothesis::Mean(v)),
        "stdev" => Ok(Hypothesis::Stdev(v)),
        _ => Err(format!("unknown test {key:?}; expected mean or stdev")),
    }
}

#[derive(Debug, Args)]
struct CalibArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also write the derived noise model as JSON.
    #[arg(long)]
    emit_noise_model: Option<PathBuf>,
    #[arg(long, default_value_t = 60.0)]
    single_qubit_ns: f64,
    #[arg(long, default_value_t = 660.0)]
    multi_qubit_ns: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parse `args` (including the program name), run, and return the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Qst(a) => cmd_qst(a, stdout),
        Command::Stats(a) => cmd_stats(a, stdout),
        Command::Calib(a) => cmd_calib(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn require_seed(seed: Option<u64>, sampled: bool) -> CliResult<Option<u64>> {
    match (sampled, seed) {
        (true, None) => Err(Failure::Usage("sampled runs need --seed or GSA_SEED".into())),
        (true, s) => Ok(s),
        (false, _) => Ok(None),
    }
}

fn emit(output: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_text(rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Stream for repetition `rep` of oracle `index`.
fn stream(index: usize, rep: u64) -> u64 {
    ((index as u64) << 32) | rep
}

#[derive(Debug, Serialize)]
struct RunReport {
    oracle: OracleSpec,
    backend: String,
    iterations: usize,
    repetitions: u64,
    shots: Option<u64>,
    seed: Option<u64>,
    /// One-iteration closed form.
    theoretical_success: f64,
    classical_baseline: f64,
    /// Means over repetitions.
    asp: f64,
    sso: f64,
    /// Exact, or pooled frequencies over all repetitions.
    probabilities: BTreeMap<String, f64>,
    per_repetition: Vec<MetricsReport>,
    counts: Vec<CountsHistogram>,
}

struct Outcome {
    reports: Vec<MetricsReport>,
    counts: Vec<CountsHistogram>,
    probabilities: Distribution,
}

fn execute(
    plan: &GroverPlan,
    model: Option<&NoiseModel>,
    tag: &str,
    shots: Option<u64>,
    seed: Option<u64>,
    index: usize,
) -> Result<Outcome> {
    let dist = search_distribution(plan, model)?;
    let Some(shots) = shots else {
        return Ok(Outcome {
            reports: vec![metrics_report_analytic(&dist, &plan.oracle, tag)?],
            counts: Vec::new(),
            probabilities: dist,
        });
    };
    let seed = seed.expect("seed checked by caller");
    let mut reports = Vec::new();
    let mut counts = Vec::new();
    let mut pooled = vec![0u64; dist.probs().len()];
    for rep in 0..plan.repetitions as u64 {
        let c = sample_counts_stream(&dist, shots, seed, stream(index, rep))?;
        for (i, slot) in pooled.iter_mut().enumerate() {
            *slot += c.count_index(i);
        }
        reports.push(metrics_report(&c, &plan.oracle, tag)?);
        counts.push(c);
    }
    let total: u64 = pooled.iter().sum();
    let probabilities = Distribution::new(dist.num_qubits(), pooled.iter().map(|c| *c as f64 / total as f64).collect())?;
    Ok(Outcome { reports, counts, probabilities })
}

fn mean_of(reports: &[MetricsReport], f: fn(&MetricsReport) -> f64) -> f64 {
    reports.iter().map(f).sum::<f64>() / reports.len() as f64
}

fn cmd_run(a: RunArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let seed = require_seed(a.exec.seed, a.shots.is_some())?;
    let spec = a.marked.with_style(a.exec.style.into());
    let plan = GroverPlan::new(spec.clone())
        .iterations(a.exec.iterations)
        .repetitions(a.repetitions as usize);
    let model = a.exec.backend.model()?;
    let tag = a.exec.backend.tag();
    let out = execute(&plan, model.as_ref(), &tag, a.shots, seed, 0)?;
    let report = RunReport {
        theoretical_success: theoretical_success(spec.marked_count(), spec.search_space())?,
        classical_baseline: classical_baseline(spec.marked_count(), spec.search_space())?,
        asp: mean_of(&out.reports, |r| r.asp),
        sso: mean_of(&out.reports, |r| r.sso),
        probabilities: out.probabilities.to_label_map(),
        oracle: spec,
        backend: tag,
        iterations: a.exec.iterations,
        repetitions: a.repetitions,
        shots: a.shots,
        seed,
        per_repetition: out.reports,
        counts: out.counts,
    };
    let text = match a.format {
        Format::Json => to_json(&report)?,
        Format::Csv | Format::Table => {
            let mut rows = vec![vec!["quantity".to_string(), "label".into(), "value".into()]];
            for (label, p) in &report.probabilities {
                rows.push(vec!["probability".into(), label.clone(), p.to_string()]);
            }
            for (name, v) in [
                ("asp", report.asp),
                ("sso", report.sso),
                ("theoretical_success", report.theoretical_success),
                ("classical_baseline", report.classical_baseline),
            ] {
                rows.push(vec![name.into(), String::new(), v.to_string()]);
            }
            csv_text(&rows)?
        }
    };
    Ok(emit(&a.exec.output, stdout, &text)?)
}

#[derive(Debug, Serialize)]
struct SweepRow {
    index: usize,
    marked: Vec<String>,
    /// Percent.
    sso: f64,
    asp: f64,
}

#[derive(Debug, Serialize)]
struct ColumnSummary {
    median: f64,
    stdev: f64,
    mean: f64,
    se_mean: f64,
}

impl From<StatSummary> for ColumnSummary {
    fn from(s: StatSummary) -> Self {
        ColumnSummary { median: s.median, stdev: s.stdev, mean: s.mean, se_mean: s.se_mean }
    }
}

#[derive(Debug, Serialize)]
struct SweepReport {
    suite: String,
    backend: String,
    style: OracleStyle,
    iterations: usize,
    repetitions: u64,
    shots: Option<u64>,
    seed: Option<u64>,
    rows: Vec<SweepRow>,
    sso: ColumnSummary,
    asp: ColumnSummary,
}

fn cmd_sweep(a: SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let seed = require_seed(a.exec.seed, a.shots.is_some())?;
    let style: OracleStyle = a.exec.style.into();
    let specs: Vec<OracleSpec> = match a.suite {
        Suite::Single => SINGLE_MARKED.iter().map(|m| OracleSpec::new(3, [m], style)).collect::<Result<_>>()?,
        Suite::Double => MARKED_PAIRS.iter().map(|p| OracleSpec::new(3, p, style)).collect::<Result<_>>()?,
    };
    let model = a.exec.backend.model()?;
    let tag = a.exec.backend.tag();
    let rows: Vec<SweepRow> = specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let plan = GroverPlan::new(spec.clone())
                .iterations(a.exec.iterations)
                .repetitions(a.repetitions as usize);
            let out = execute(&plan, model.as_ref(), &tag, a.shots, seed, i)?;
            Ok(SweepRow {
                index: i + 1,
                marked: spec.marked().to_vec(),
                sso: 100.0 * mean_of(&out.reports, |r| r.sso),
                asp: 100.0 * mean_of(&out.reports, |r| r.asp),
            })
        })
        .collect::<Result<_>>()?;
    let column = |f: fn(&SweepRow) -> f64| stats::summarize(&rows.iter().map(f).collect::<Vec<_>>());
    let report = SweepReport {
        suite: format!("{:?}", a.suite).to_lowercase(),
        backend: tag,
        style,
        iterations: a.exec.iterations,
        repetitions: a.repetitions,
        shots: a.shots,
        seed,
        sso: column(|r| r.sso)?.into(),
        asp: column(|r| r.asp)?.into(),
        rows,
    };
    let text = match a.format {
        Format::Json => to_json(&report)?,
        Format::Csv => csv_text(&sweep_rows(&report))?,
        Format::Table => {
            let mut t = String::new();
            for (i, r) in sweep_rows(&report).iter().enumerate() {
                let _ = writeln!(t, "{:<16}{:>12}{:>12}", r[0], r[1], r[2]);
                if i == 0 {
                    let _ = writeln!(t, "{}", "-".repeat(40));
                }
            }
            t
        }
    };
    Ok(emit(&a.exec.output, stdout, &text)?)
}

fn sweep_rows(r: &SweepReport) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["oracle".to_string(), "sso_percent".into(), "asp_percent".into()]];
    for row in &r.rows {
        rows.push(vec![
            format!("({}) {}", row.index, row.marked.join(",")),
            format!("{:.2}", row.sso),
            format!("{:.2}", row.asp),
        ]);
    }
    for (name, f) in [
        ("Median", (|c: &ColumnSummary| c.median) as fn(&ColumnSummary) -> f64),
        ("StDev", |c| c.stdev),
        ("Mean", |c| c.mean),
        ("SE Mean", |c| c.se_mean),
    ] {
        rows.push(vec![name.into(), format!("{:.4}", f(&r.sso)), format!("{:.4}", f(&r.asp))]);
    }
    rows
}

fn cmd_qst(a: QstArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let seed = require_seed(a.exec.seed, a.shots_per_setting.is_some())?;
    let spec = a.marked.with_style(a.exec.style.into());
    let plan = GroverPlan::new(spec.clone()).iterations(a.exec.iterations);
    let backend = match a.exec.backend.model()? {
        None => QstBackend::Ideal,
        Some(m) => QstBackend::Noisy(m),
    };
    let shots = a.shots_per_setting.map_or(Shots::Analytic, Shots::PerSetting);
    let result = run_qst_for_plan(&plan, &backend, shots, seed.unwrap_or(0))?;
    let mut value = serde_json::to_value(&result).map_err(Error::from)?;
    let obj = value.as_object_mut().expect("tomography result is an object");
    obj.insert("backend".into(), a.exec.backend.tag().into());
    obj.insert("oracle".into(), serde_json::to_value(&spec).map_err(Error::from)?);
    obj.insert("iterations".into(), a.exec.iterations.into());
    obj.insert("seed".into(), seed.into());
    Ok(emit(&a.exec.output, stdout, &to_json(&value)?)?)
}

/// Values of one CSV column; errors carry the line number.
pub fn read_column(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for r in reader.records() {
        let r = r.map_err(|e| Error::Parse {
            location: e.position().map_or("input".into(), |p| format!("line {}", p.line())),
            message: e.to_string(),
        })?;
        records.push(r);
    }
    let Some(first) = records.first() else {
        return Err(Error::InsufficientData("input has no rows".into()));
    };
    let header = first.iter().next().is_some_and(|c| c.parse::<f64>().is_err());
    let col = match column {
        None => 0,
        Some(name) if header => first
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Schema(name.to_string()))?,
        Some(name) => return Err(Error::Schema(name.to_string())),
    };
    records
        .iter()
        .skip(header as usize)
        .map(|r| {
            let line = r.position().map_or(0, |p| p.line());
            let cell = r.get(col).unwrap_or("");
            cell.parse::<f64>().map_err(|_| Error::Parse {
                location: format!("line {line}"),
                message: format!("{cell:?} is not a number"),
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct StatsReport {
    alpha: f64,
    summary: StatSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_test: Option<TestResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    variance_test: Option<VarianceTest>,
}

fn cmd_stats(a: StatsArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Failure::Usage(format!("--alpha {} must be in (0, 1)", a.alpha)));
    }
    let values = read_column(&a.input, a.column.as_deref())?;
    let mut report = StatsReport { alpha: a.alpha, summary: stats::summarize(&values)?, mean_test: None, variance_test: None };
    for h in &a.tests {
        match *h {
            Hypothesis::Mean(mu) => report.mean_test = Some(stats::t_test_mean(&values, mu, a.alpha)?),
            Hypothesis::Stdev(sigma) => report.variance_test = Some(stats::variance_test(&values, sigma, a.alpha)?),
        }
    }
    let json = to_json(&report)?;
    if let Some(path) = &a.json {
        std::fs::write(path, &json).map_err(Error::from)?;
    }
    let text = match a.format {
        Format::Json => json,
        Format::Csv => {
            let rows: Vec<Vec<String>> = std::iter::once(vec!["quantity".to_string(), "value".into()])
                .chain(stats_lines(&report).into_iter().map(|(k, v)| vec![k, v]))
                .collect();
            csv_text(&rows)?
        }
        Format::Table => stats_lines(&report).iter().map(|(k, v)| format!("{k:<30}{v}\n")).collect(),
    };
    stdout.write_all(text.as_bytes()).map_err(Error::from)?;
    Ok(())
}

fn stats_lines(r: &StatsReport) -> Vec<(String, String)> {
    let s = &r.summary;
    let level = 100.0 * (1.0 - r.alpha);
    let mut out = vec![
        ("N".to_string(), s.n.to_string()),
        ("Mean".into(), format!("{:.4}", s.mean)),
        ("StDev".into(), format!("{:.4}", s.stdev)),
        ("SE Mean".into(), format!("{:.4}", s.se_mean)),
        ("Median".into(), format!("{:.4}", s.median)),
    ];
    if let Some(t) = &r.mean_test {
        out.push((format!("t-test ({level}% CI)"), format!("({:.4}, {:.4})", t.ci_lower, t.ci_upper)));
        out.push(("Hypothesis tests (Mean)".into(), format!("P-value: {:.4} (mu0 = {})", t.p_value, t.null_value)));
    }
    if let Some(v) = &r.variance_test {
        out.push((format!("{level}% CI StDev"), format!("({:.4}, {:.4})", v.stdev_ci_lower, v.stdev_ci_upper)));
        out.push((format!("{level}% CI Variance"), format!("({:.4}, {:.4})", v.test.ci_lower, v.test.ci_upper)));
        out.push((
            "Hypothesis tests (Variance)".into(),
            format!("P-value: {:.4} (sigma0 = {})", v.test.p_value, v.test.null_value),
        ));
    }
    out
}

fn cmd_calib(a: CalibArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let summary = load_summary(&a.file)?;
    if let Some(path) = &a.emit_noise_model {
        let durations = Durations { single_qubit_ns: a.single_qubit_ns, multi_qubit_ns: a.multi_qubit_ns, readout_ns: None };
        let model = from_calibration(&summary, &durations)?;
        std::fs::write(path, model.to_json()?).map_err(Error::from)?;
    }
    let text = match a.format {
        Format::Json => to_json(&summary)?,
        Format::Csv => csv_text(&calib_rows(&summary))?,
        Format::Table => calib_rows(&summary)
            .iter()
            .map(|r| r.iter().map(|c| format!("{c:>14}")).collect::<String>() + "\n")
            .collect(),
    };
    Ok(emit(&a.output, stdout, &text)?)
}

/// Statistic per row, field per column.
fn calib_rows(s: &CalibrationSummary) -> Vec<Vec<String>> {
    let fields = s.rows();
    let mut rows = vec![std::iter::once("statistic".to_string()).chain(fields.iter().map(|(n, _)| n.to_string())).collect()];
    type Pick = fn(&crate::calibration::FieldSummary) -> f64;
    let stats: [(&str, Pick); 7] = [
        ("Mean", |f| f.mean),
        ("StDev", |f| f.stdev),
        ("Min.", |f| f.min),
        ("25%", |f| f.q25),
        ("Median", |f| f.median),
        ("75%", |f| f.q75),
        ("Max.", |f| f.max),
    ];
    for (name, pick) in stats {
        rows.push(std::iter::once(name.to_string()).chain(fields.iter().map(|(_, f)| format!("{:.6}", pick(f)))).collect());
    }
    rows
}
