//! Command-line front end: `fit`, `simulate`, `compare`, and `histogram`.
//!
//! Exit codes: 0 success; 1 usage or data error; 2 fit completed without
//! convergence (the table is still printed, with a warning on stderr).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::estimation::{self, FitConfig, FitResult};
use crate::links::{self, LinkKind};
use crate::model::Dataset;
use crate::selection::{self, Preferred};
use crate::simulation::{self, CovariateSpec, Scenario, StudyReport};

/// Zero-inflated Bernoulli regression toolkit.
#[derive(Debug, Parser)]
#[command(name = "ziber", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a model to a CSV file and report estimates, ASEs, and p-values.
    Fit(FitArgs),
    /// Run a Monte Carlo study for a built-in or JSON-defined scenario.
    Simulate(SimulateArgs),
    /// Fit two or more models to the same data and compare them pairwise
    /// with the Vuong test.
    Compare(CompareArgs),
    /// Tabulate a count column as value,frequency rows and report the zero
    /// fraction.
    Histogram(HistogramArgs),
}

#[derive(Debug, Args)]
struct FitArgs {
    /// CSV file with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Response column; every value must be 0 or 1.
    #[arg(long)]
    y: String,
    /// Event-only covariate columns (comma-separated).
    #[arg(long, value_delimiter = ',')]
    x: Vec<String>,
    /// Susceptible-probability covariate columns (comma-separated); they
    /// also enter the event design.
    #[arg(long, value_delimiter = ',')]
    z: Vec<String>,
    #[arg(long, value_enum)]
    link: LinkChoice,
    /// Also write the report as CSV (full precision).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Confidence level for Wald intervals.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Seed for optimizer restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Built-in scenario name (case1-A … case2-D) or a scenario JSON path.
    #[arg(long)]
    scenario: String,
    /// Observations per replication.
    #[arg(long)]
    n: usize,
    /// Number of replications.
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the per-parameter report as CSV (full precision).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    y: String,
    #[arg(long, value_delimiter = ',')]
    x: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    z: Vec<String>,
    /// Repeat for each model; all later models are tested against the first.
    #[arg(long, value_enum)]
    link: Vec<LinkChoice>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct HistogramArgs {
    #[arg(long)]
    data: PathBuf,
    /// Count-valued column to tabulate.
    #[arg(long)]
    y: String,
    /// Write the value,count rows here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Model selector: the four SP links plus the two plain baselines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LinkChoice {
    Logit,
    Probit,
    Cloglog,
    Gev,
    PlainLogit,
    PlainProbit,
}

impl LinkChoice {
    fn label(self) -> &'static str {
        match self {
            Self::Logit => "logit",
            Self::Probit => "probit",
            Self::Cloglog => "cloglog",
            Self::Gev => "gev",
            Self::PlainLogit => "plain-logit",
            Self::PlainProbit => "plain-probit",
        }
    }

    fn fit(self, data: &Dataset, config: &FitConfig) -> Result<FitResult> {
        match self {
            Self::Logit => estimation::fit(data, LinkKind::Logit, config),
            Self::Probit => estimation::fit(data, LinkKind::Probit, config),
            Self::Cloglog => estimation::fit(data, LinkKind::Cloglog, config),
            Self::Gev => estimation::fit(data, LinkKind::Gev, config),
            Self::PlainLogit => estimation::fit_plain(data, LinkKind::Logit, config),
            Self::PlainProbit => estimation::fit_plain(data, LinkKind::Probit, config),
        }
    }
}

/// Parse the process arguments, dispatch, and return the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Fit(args) => cmd_fit(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Histogram(args) => cmd_histogram(&args),
    }
}

// ---------------------------------------------------------------- CSV input

/// A raw CSV table: header names plus unparsed cells.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table(path: &Path) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Cli(format!("cannot read {}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Cli(format!("cannot read {} header: {e}", path.display())))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record
            .map_err(|e| Error::Cli(format!("{} row {}: {e}", path.display(), i + 1)))?;
        rows.push(record.iter().map(str::to_owned).collect());
    }
    Ok(Table { header, rows })
}

impl Table {
    fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| {
                Error::Cli(format!(
                    "column '{name}' not found; file has: {}",
                    self.header.join(", ")
                ))
            })
    }

    /// Parse a column as numbers; errors cite the column and 1-based data
    /// row.
    fn numeric(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.column(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.get(idx)
                    .and_then(|cell| cell.trim().parse::<f64>().ok())
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        Error::Cli(format!(
                            "column '{name}' row {}: not a finite number ({:?})",
                            i + 1,
                            row.get(idx).map_or("", String::as_str)
                        ))
                    })
            })
            .collect()
    }
}

/// Assemble a Dataset from a CSV file and the schema flags.
fn load_dataset(path: &Path, y: &str, x: &[String], z: &[String]) -> Result<Dataset> {
    let table = read_table(path)?;
    if table.rows.is_empty() {
        return Err(Error::Cli(format!("{} has no data rows", path.display())));
    }
    let mut names: Vec<&str> = std::iter::once(y)
        .chain(x.iter().map(String::as_str))
        .chain(z.iter().map(String::as_str))
        .collect();
    // Schema first: every named column must exist before any value parses.
    for name in &names {
        table.column(name)?;
    }
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Cli(
            "column names in --y/--x/--z must be distinct".into(),
        ));
    }
    let ys = table.numeric(y)?;
    for (i, &v) in ys.iter().enumerate() {
        if v != 0.0 && v != 1.0 {
            return Err(Error::Cli(format!(
                "column '{y}' row {}: response must be 0 or 1, found {v}",
                i + 1
            )));
        }
    }
    let x_cols: Vec<Vec<f64>> = x
        .iter()
        .map(|name| table.numeric(name))
        .collect::<Result<_>>()?;
    let z_cols: Vec<Vec<f64>> = z
        .iter()
        .map(|name| table.numeric(name))
        .collect::<Result<_>>()?;
    let n = ys.len();
    let to_rows = |cols: &[Vec<f64>]| -> Vec<Vec<f64>> {
        (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    };
    Dataset::new(ys, to_rows(&x_cols), to_rows(&z_cols))
}

// ------------------------------------------------------------- table output

/// Fixed 4-decimal cell, the table-wide number format.
fn num(v: f64) -> String {
    format!("{v:.4}")
}

/// Align columns: headers and cells padded to the widest entry, text
/// left-aligned, numbers right-aligned.
fn render_table(headers: &[&str], rows: &[Vec<String>], numeric_from: usize) -> String {
    let cols = headers.len();
    let mut width = vec![0usize; cols];
    for (c, h) in headers.iter().enumerate() {
        width[c] = h.len();
    }
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            width[c] = width[c].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut emit = |cells: &[String]| {
        for (c, cell) in cells.iter().enumerate() {
            if c > 0 {
                out.push_str("  ");
            }
            if c < numeric_from {
                let _ = write!(out, "{cell:<w$}", w = width[c]);
            } else {
                let _ = write!(out, "{cell:>w$}", w = width[c]);
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    emit(&headers.iter().map(|h| (*h).to_owned()).collect::<Vec<_>>());
    for row in rows {
        emit(row);
    }
    out
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Cli(format!("cannot write {}: {e}", path.display())))
}

// ------------------------------------------------------------------ fit

fn cmd_fit(args: &FitArgs) -> Result<i32> {
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(Error::InvalidLevel(args.level));
    }
    let data = load_dataset(&args.data, &args.y, &args.x, &args.z)?;
    let config = FitConfig {
        seed: args.seed,
        ..FitConfig::default()
    };
    let fit = args.link.fit(&data, &config)?;

    let names = fit.beta_hat.packed_names();
    let estimates = fit.beta_hat.pack();
    // p-values directly from the ASEs so singular fits still print (as NaN).
    let p_values: Vec<f64> = estimates
        .iter()
        .zip(&fit.ase)
        .map(|(e, a)| 2.0 * links::std_normal_cdf(-(e / a).abs()))
        .collect();

    println!(
        "{} fit on {} (n = {})",
        args.link.label(),
        args.data.display(),
        data.n()
    );
    println!(
        "log-likelihood: {}   converged: {}   iterations: {}",
        num(fit.loglik),
        if fit.converged { "yes" } else { "no" },
        fit.iterations
    );
    println!();
    let rows: Vec<Vec<String>> = (0..names.len())
        .map(|j| {
            vec![
                names[j].clone(),
                num(estimates[j]),
                num(fit.ase[j]),
                num(p_values[j]),
            ]
        })
        .collect();
    print!(
        "{}",
        render_table(&["parameter", "estimate", "ASE", "p-value"], &rows, 1)
    );

    if let Some(out) = &args.out {
        let mut csv = String::from("parameter,estimate,ase,p_value\n");
        for j in 0..names.len() {
            let _ = writeln!(
                csv,
                "{},{},{},{}",
                names[j], estimates[j], fit.ase[j], p_values[j]
            );
        }
        write_out(out, &csv)?;
    }

    if fit.boundary {
        eprintln!("warning: estimate lies on the parameter-space boundary");
    }
    if fit.singular {
        eprintln!(
            "warning: information matrix is not positive definite; \
             standard errors use a floored pseudo-inverse"
        );
    }
    if fit.converged {
        Ok(0)
    } else {
        eprintln!("warning: fit did not converge; reporting the best point found");
        Ok(2)
    }
}

// ------------------------------------------------------------------ simulate

/// On-disk scenario description for user-defined studies.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    link: LinkKind,
    gamma: Vec<f64>,
    eta: Vec<f64>,
    #[serde(default)]
    eps: Option<f64>,
    x_spec: Vec<CovariateSpec>,
    z_spec: Vec<CovariateSpec>,
    /// Z columns shared with the event design; defaults to all of them.
    #[serde(default)]
    event_columns: Option<Vec<usize>>,
}

fn resolve_scenario(spec: &str) -> Result<Scenario> {
    if let Some(s) = Scenario::builtin(spec) {
        return Ok(s);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::Cli(format!(
            "unknown scenario '{spec}'; built-in scenarios are {} (or pass a JSON file path)",
            simulation::BUILTIN_NAMES.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Cli(format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidScenario(format!("{}: {e}", path.display())))?;
    let beta = crate::model::Beta::new(file.link, file.gamma, file.eta, file.eps)?;
    let event = file
        .event_columns
        .unwrap_or_else(|| (0..file.z_spec.len()).collect());
    Scenario::new(spec, beta, file.x_spec, file.z_spec, event)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    let scenario = resolve_scenario(&args.scenario)?;
    let config = FitConfig {
        seed: args.seed,
        ..FitConfig::default()
    };
    let report = simulation::run_study(&scenario, args.n, args.reps, args.seed, &config)?;
    print!("{}", study_table(&report, &scenario, args.seed));
    if let Some(out) = &args.out {
        write_out(out, &report.to_csv())?;
    }
    Ok(0)
}

fn study_table(report: &StudyReport, scenario: &Scenario, seed: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scenario {} ({} link), n = {}, reps = {}, seed = {}",
        report.scenario,
        scenario.link,
        report.n,
        report.reps,
        seed
    );
    let _ = writeln!(
        out,
        "failures: {}   mean zero fraction: {}",
        report.failures,
        num(report.mean_zi_ratio)
    );
    out.push('\n');
    let rows: Vec<Vec<String>> = (0..report.parameters.len())
        .map(|j| {
            vec![
                report.parameters[j].clone(),
                num(report.true_values[j]),
                num(report.bias[j]),
                num(report.mean_ase[j]),
                num(report.empirical_sd[j]),
                num(report.cp[j]),
            ]
        })
        .collect();
    out.push_str(&render_table(
        &["parameter", "true", "bias", "mean_ase", "emp_sd", "cp"],
        &rows,
        1,
    ));
    out
}

// ------------------------------------------------------------------ compare

fn cmd_compare(args: &CompareArgs) -> Result<i32> {
    if args.link.len() < 2 {
        return Err(Error::Cli(
            "compare needs at least two --link values".into(),
        ));
    }
    let data = load_dataset(&args.data, &args.y, &args.x, &args.z)?;
    let config = FitConfig {
        seed: args.seed,
        ..FitConfig::default()
    };
    let fits: Vec<FitResult> = args
        .link
        .iter()
        .map(|link| {
            let fit = link.fit(&data, &config)?;
            if !fit.converged {
                eprintln!("warning: {} fit did not converge", link.label());
            }
            Ok(fit)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut csv = String::from("model_a,model_b,n,statistic,mean_lr,sd_lr,preferred\n");
    for j in 1..fits.len() {
        let v = selection::vuong(&fits[0], &fits[j], data.n())?;
        let (a, b) = (args.link[0].label(), args.link[j].label());
        let verdict = match v.preferred {
            Preferred::ModelA => format!("prefer {a}"),
            Preferred::ModelB => format!("prefer {b}"),
            Preferred::Indeterminate => "indeterminate".to_owned(),
        };
        rows.push(vec![
            a.to_owned(),
            b.to_owned(),
            num(v.statistic),
            verdict.clone(),
        ]);
        let _ = writeln!(
            csv,
            "{a},{b},{},{},{},{},{}",
            v.n,
            v.statistic,
            v.mean_lr,
            v.sd_lr,
            match v.preferred {
                Preferred::ModelA => a,
                Preferred::ModelB => b,
                Preferred::Indeterminate => "indeterminate",
            }
        );
    }
    println!(
        "Vuong comparisons against {} on {} (n = {})",
        args.link[0].label(),
        args.data.display(),
        data.n()
    );
    println!();
    print!(
        "{}",
        render_table(&["model_a", "model_b", "statistic", "verdict"], &rows, 2)
    );
    if let Some(out) = &args.out {
        write_out(out, &csv)?;
    }
    Ok(0)
}

// ------------------------------------------------------------------ histogram

fn cmd_histogram(args: &HistogramArgs) -> Result<i32> {
    let table = read_table(&args.data)?;
    if table.rows.is_empty() {
        return Err(Error::Cli(format!(
            "{} has no data rows",
            args.data.display()
        )));
    }
    let values = table.numeric(&args.y)?;
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, &v) in values.iter().enumerate() {
        if v.fract() != 0.0 || v < 0.0 {
            return Err(Error::Cli(format!(
                "column '{}' row {}: expected a non-negative integer count, found {v}",
                args.y,
                i + 1
            )));
        }
        *counts.entry(v as u64).or_insert(0) += 1;
    }
    let zeros = counts.get(&0).copied().unwrap_or(0);
    let mut csv = String::from("value,count\n");
    for (value, count) in &counts {
        let _ = writeln!(csv, "{value},{count}");
    }
    println!(
        "zero fraction: {} ({zeros}/{})",
        num(zeros as f64 / values.len() as f64),
        values.len()
    );
    match &args.out {
        Some(out) => write_out(out, &csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}
