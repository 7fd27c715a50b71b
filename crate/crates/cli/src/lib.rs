//! Command-line front end: `transform`, `verify`, `stats`, `bench`, `sample`.
//!
//! Exit codes are `0` on success, `1` for usage or input errors and `2` when
//! a result misses its tolerance.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qba_core::numerics::{bluestein_classical, dft_direct, max_abs_diff};
use qba_core::qba::{random_unit_vector, trial_rng, MASS_TOL};
use qba_core::simulator::sample_distribution;
use qba_core::{build_plan, run_qba, verify_range, Complex64, DiagonalPath, QbaError, RunOptions};
use serde::Serialize;
use thiserror::Error;

pub mod input;
pub mod stats;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] QbaError),
    #[error("output: {0}")]
    Output(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "qba",
    version,
    about = "Exact arbitrary-size quantum Fourier transform by state-vector simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the simulated transform on one input and compare with the direct DFT.
    Transform(TransformArgs),
    /// Sweep random inputs over a range of lengths.
    Verify(VerifyArgs),
    /// Gate counts per transform length.
    Stats(StatsArgs),
    /// Time the classical direct DFT against classical Bluestein.
    Bench(BenchArgs),
    /// Sample measurements of the post-selected logical register.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Transform length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Use the basis vector e_j as input.
    #[arg(long)]
    pub basis: Option<usize>,
    /// JSON input vector: {"x": [[re, im], ...]} or [r, r, ...].
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagonalArg {
    Gates,
    Reference,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Largest allowed absolute error per component.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// How the chirp diagonals are applied.
    #[arg(long, value_enum, default_value_t = DiagonalArg::Gates)]
    pub diagonal: DiagonalArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 16)]
    pub n_max: usize,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest allowed relative L2 error.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Transform lengths (comma separated or repeated).
    #[arg(long = "n", value_delimiter = ',', default_values_t = [3usize, 6])]
    pub ns: Vec<usize>,
    /// Also fit the growth of the gate total over a range of register sizes.
    #[arg(long)]
    pub fit: bool,
    #[arg(long, default_value_t = 2)]
    pub fit_m_min: usize,
    #[arg(long, default_value_t = 16)]
    pub fit_m_max: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Transform lengths (comma separated or repeated).
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 64, 256, 1024, 4096])]
    pub sizes: Vec<usize>,
    /// Best-of repeat count per measurement.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1024)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Rendered output plus the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub exit_code: i32,
}

impl Report {
    fn ok(text: String) -> Self {
        Report {
            text,
            exit_code: EXIT_OK,
        }
    }

    fn checked(text: String, passed: bool) -> Self {
        Report {
            text,
            exit_code: if passed { EXIT_OK } else { EXIT_TOLERANCE },
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Transform(a) => cmd_transform(a, cli.format),
        Command::Verify(a) => cmd_verify(a, cli.format),
        Command::Stats(a) => cmd_stats(a, cli.format),
        Command::Bench(a) => cmd_bench(a, cli.format),
        Command::Sample(a) => cmd_sample(a, cli.format),
    }
}

fn check_tolerance(t: f64) -> Result<(), CliError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "tolerance must be positive, got {t}"
        )))
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Output(e.to_string()))
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Serialize)]
pub struct TransformDoc {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub alpha: f64,
    pub success_probability: f64,
    pub logical_mass: f64,
    pub y: Vec<[f64; 2]>,
    pub reference: Vec<[f64; 2]>,
    pub max_abs_error: f64,
}

#[derive(Serialize)]
struct TransformCsvRow {
    k: usize,
    y_re: f64,
    y_im: f64,
    ref_re: f64,
    ref_im: f64,
}

pub fn cmd_transform(a: &TransformArgs, format: Format) -> Result<Report, CliError> {
    check_tolerance(a.tolerance)?;
    let x = input::resolve(a.input.n, a.input.basis, a.input.input.as_deref())?;
    let plan = build_plan(x.len())?;
    let options = RunOptions {
        diagonal_path: match a.diagonal {
            DiagonalArg::Gates => DiagonalPath::Gates,
            DiagonalArg::Reference => DiagonalPath::Reference,
        },
        verify: false,
    };
    let res = run_qba(&x, &plan, options)?;
    let reference = dft_direct(&x)?;
    let max_abs_error = max_abs_diff(&res.y, &reference);
    let passed = max_abs_error <= a.tolerance;

    let text = match format {
        Format::Json => to_json(&TransformDoc {
            n: res.n,
            m: res.m,
            big_m: res.big_m,
            alpha: res.alpha,
            success_probability: res.success_probability,
            logical_mass: res.logical_mass,
            y: pairs(&res.y),
            reference: pairs(&reference),
            max_abs_error,
        })?,
        Format::Csv => {
            let rows: Vec<_> = res
                .y
                .iter()
                .zip(&reference)
                .enumerate()
                .map(|(k, (y, r))| TransformCsvRow {
                    k,
                    y_re: y.re,
                    y_im: y.im,
                    ref_re: r.re,
                    ref_im: r.im,
                })
                .collect();
            to_csv(&rows)?
        }
    };
    Ok(Report::checked(text, passed))
}

#[derive(Debug, Serialize)]
struct VerifyDoc<'a> {
    seed: u64,
    trials: usize,
    tolerance: f64,
    max_rel_error: f64,
    max_mass_error: f64,
    passed: bool,
    rows: &'a [qba_core::VerifyRow],
}

pub fn cmd_verify(a: &VerifyArgs, format: Format) -> Result<Report, CliError> {
    check_tolerance(a.tolerance)?;
    if a.n_min == 0 || a.n_min > a.n_max {
        return Err(CliError::Usage(format!(
            "need 1 <= --n-min <= --n-max, got {} and {}",
            a.n_min, a.n_max
        )));
    }
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let report = verify_range(a.n_min, a.n_max, a.trials, a.seed)?;
    let passed = report.max_rel_error() <= a.tolerance
        && report.max_mass_error() <= MASS_TOL
        && report.rows.iter().all(|r| r.success_bound_holds);
    let text = match format {
        Format::Json => to_json(&VerifyDoc {
            seed: a.seed,
            trials: a.trials,
            tolerance: a.tolerance,
            max_rel_error: report.max_rel_error(),
            max_mass_error: report.max_mass_error(),
            passed,
            rows: &report.rows,
        })?,
        Format::Csv => to_csv(&report.rows)?,
    };
    Ok(Report::checked(text, passed))
}

#[derive(Debug, Serialize)]
struct StatsDoc {
    rows: Vec<stats::StatsRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<stats::GrowthFit>,
}

pub fn cmd_stats(a: &StatsArgs, format: Format) -> Result<Report, CliError> {
    if a.ns.contains(&0) {
        return Err(CliError::Usage("every --n must be at least 1".into()));
    }
    let rows =
        a.ns.iter()
            .map(|&n| stats::stats_row(n))
            .collect::<Result<Vec<_>, _>>()?;
    let fit = if a.fit {
        if a.fit_m_min < 1 || a.fit_m_min + 2 > a.fit_m_max || a.fit_m_max > 20 {
            return Err(CliError::Usage(
                "fit range needs 1 <= --fit-m-min, at least three points, and --fit-m-max <= 20"
                    .into(),
            ));
        }
        Some(stats::growth_fit(a.fit_m_min, a.fit_m_max)?)
    } else {
        None
    };
    let text = match format {
        Format::Json => to_json(&StatsDoc { rows, fit })?,
        Format::Csv => to_csv(&rows)?,
    };
    Ok(Report::ok(text))
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct BenchRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub method: String,
    pub seconds: f64,
}

type Transform = fn(&[Complex64]) -> qba_core::Result<Vec<Complex64>>;

pub fn cmd_bench(a: &BenchArgs, format: Format) -> Result<Report, CliError> {
    if a.sizes.contains(&0) {
        return Err(CliError::Usage("every size must be at least 1".into()));
    }
    let repeats = a.repeats.max(1);
    let mut rows = Vec::new();
    for &n in &a.sizes {
        let x = random_unit_vector(n, &mut trial_rng(a.seed, n, 0));
        let methods: [(&str, Transform); 2] = [
            ("dft_direct", dft_direct),
            ("bluestein_classical", bluestein_classical),
        ];
        for (name, f) in methods {
            let mut best = f64::INFINITY;
            for _ in 0..repeats {
                let t = Instant::now();
                std::hint::black_box(f(std::hint::black_box(&x))?);
                best = best.min(t.elapsed().as_secs_f64());
            }
            rows.push(BenchRow {
                n,
                method: name.to_string(),
                seconds: best,
            });
        }
    }
    let text = match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows)?,
    };
    Ok(Report::ok(text))
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SampleRow {
    pub index: usize,
    pub count: u64,
    pub probability: f64,
}

#[derive(Serialize)]
struct SampleDoc<'a> {
    n: usize,
    shots: u64,
    seed: u64,
    success_probability: f64,
    rows: &'a [SampleRow],
}

/// Draws from the post-selected register conditioned on the logical
/// subspace, so every outcome is a valid spectrum index `k < n`.
pub fn cmd_sample(a: &SampleArgs, format: Format) -> Result<Report, CliError> {
    if a.shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let x = input::resolve(a.input.n, a.input.basis, a.input.input.as_deref())?;
    let plan = build_plan(x.len())?;
    let res = run_qba(&x, &plan, RunOptions::default())?;
    let hist = sample_distribution(&res.logical_probabilities, a.shots, a.seed)?;
    let rows: Vec<SampleRow> = hist
        .into_iter()
        .map(|(index, count)| SampleRow {
            index,
            count,
            probability: res.logical_probabilities[index],
        })
        .collect();
    let text = match format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => to_json(&SampleDoc {
            n: res.n,
            shots: a.shots,
            seed: a.seed,
            success_probability: res.success_probability,
            rows: &rows,
        })?,
    };
    Ok(Report::ok(text))
}
