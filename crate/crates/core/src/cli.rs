//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a bound or certification check fails
//! (or output cannot be written), 2 on argument errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::classes::Class;
use crate::functionals::{h21_inv_log, inv_log_coeffs, inverse_coeffs, log_coeffs, CoeffTriple, GammaTriple};
use crate::report::{self, complex_serde};
use crate::verifier::{self, Certification, SearchGrid};
use crate::ymax::{y_closed, y_oracle, OracleGrid, YBranch, YInput};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HANKEL_THREADS";

/// Smallest truncation order accepted where `Γ_3` is computed.
pub const MIN_ORDER: usize = 7;

#[derive(Debug, Parser)]
#[command(name = "loghankel", version, about = "Hankel determinants of logarithmic inverse coefficients: evaluation and verification of sharp bounds")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for the maximum of |H| over the class, replay the proof's cases and certify the extremal function
    Verify {
        #[arg(long)]
        class: Class,
        /// Grid as P1xRADIALxANGULAR, at least 200x128x256
        #[arg(long, default_value = "200x128x256")]
        resolution: String,
        /// Local refinement rounds after the grid pass
        #[arg(long, default_value_t = 3)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Record wall-clock time in the report (output is then not reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate Y(A,B,C) = max over the closed disk of |A+Bz+Cz^2|+1-|z|^2
    Ymax {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// Also run the grid-search oracle and report the difference
        #[arg(long)]
        oracle: bool,
    },
    /// Coefficient functionals of z + a2 z^2 + a3 z^3 + a4 z^4
    Hankel {
        /// a2,a3,a4 (real)
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        coeffs: Vec<f64>,
    },
    /// Coefficients of the extremal function and its certified |H|
    Extremal {
        #[arg(long)]
        class: Class,
        #[arg(long, default_value_t = crate::series::DEFAULT_ORDER)]
        order: usize,
    },
    /// Random class members and their |H|, as CSV
    Sweep {
        #[arg(long)]
        class: Class,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Check(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

/// Runs the CLI with the process's standard streams.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buffer = Vec::new();
    let result = thread_pool().map_err(Failure::Usage).and_then(|pool| pool.install(|| execute(config, &mut buffer)));
    // results reach stdout even when a check fails
    if let Err(e) = out.write_all(&buffer).and_then(|()| out.flush()) {
        let _ = writeln!(err, "error: writing output: {e}");
        return 1;
    }
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            1
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("{THREADS_ENV} must be a positive integer, got '{value}'"))?;
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

fn parse_resolution(text: &str, rounds: usize) -> anyhow::Result<SearchGrid> {
    let parts: Vec<&str> = text.split(['x', 'X']).collect();
    let [p1, r, a] = parts.as_slice() else {
        bail!("resolution '{text}' must look like 200x128x256");
    };
    let num = |s: &str| s.trim().parse::<usize>().with_context(|| format!("bad resolution component '{s}'"));
    Ok(SearchGrid::checked(num(p1)?, num(r)?, num(a)?, rounds)?)
}

fn open_output<'a>(path: &Option<PathBuf>, out: &'a mut Vec<u8>) -> anyhow::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(out),
    })
}

#[derive(Serialize)]
struct OracleComparison {
    value: f64,
    radius: f64,
    angle: f64,
    difference: f64,
}

#[derive(Serialize)]
struct YmaxOutput {
    a: f64,
    b: f64,
    c: f64,
    value: f64,
    branch: YBranch,
    oracle: Option<OracleComparison>,
}

#[derive(Serialize)]
struct HankelOutput {
    coeffs: CoeffTriple,
    inverse_coeffs: CoeffTriple,
    log_coeffs: GammaTriple,
    inv_log_coeffs: GammaTriple,
    #[serde(with = "complex_serde")]
    h21: Complex64,
    h21_abs: f64,
}

fn execute(config: RunConfig, out: &mut Vec<u8>) -> Result<(), Failure> {
    match config.command {
        Command::Verify { class, resolution, rounds, seed, output, format, timing } => {
            let grid = parse_resolution(&resolution, rounds).map_err(Failure::Usage)?;
            let mut report = verifier::verify(class, &grid, seed);
            if !timing {
                report.runtime_ms = None;
            }
            let mut sink = open_output(&output, out)?;
            match format {
                Format::Json => report::write_json(&report, &mut sink).context("writing report")?,
                Format::Csv => report::write_cases_csv(&report.cases, &mut sink).context("writing report")?,
            }
            sink.flush().context("writing report")?;
            if !report.margin_ok() {
                return Err(Failure::Check(format!(
                    "{class}: search maximum {} exceeds the sharp value {} (margin {:e})",
                    report.search_max, report.sharp_value, report.margin
                )));
            }
            if report.certification.is_none() {
                let e = verifier::certify_extremal(class).expect_err("certification failed above");
                return Err(Failure::Check(e.to_string()));
            }
            Ok(())
        }
        Command::Ymax { a, b, c, oracle } => {
            let input = YInput::new(a, b, c);
            let closed = y_closed(&input);
            let oracle = oracle.then(|| {
                let o = y_oracle(&input, &OracleGrid::default());
                OracleComparison { value: o.value, radius: o.radius, angle: o.angle, difference: o.value - closed.value }
            });
            let output = YmaxOutput { a, b, c, value: closed.value, branch: closed.branch, oracle };
            report::write_json(&output, out).context("writing output")?;
            Ok(())
        }
        Command::Hankel { coeffs } => {
            let [a2, a3, a4] = coeffs.as_slice() else {
                return Err(Failure::Usage(anyhow::anyhow!(
                    "--coeffs needs exactly three values a2,a3,a4, got {}",
                    coeffs.len()
                )));
            };
            let t = CoeffTriple::real(*a2, *a3, *a4);
            let h21 = h21_inv_log(&t);
            let output = HankelOutput {
                coeffs: t,
                inverse_coeffs: inverse_coeffs(&t),
                log_coeffs: log_coeffs(&t),
                inv_log_coeffs: inv_log_coeffs(&t),
                h21,
                h21_abs: h21.norm(),
            };
            report::write_json(&output, out).context("writing output")?;
            Ok(())
        }
        Command::Extremal { class, order } => {
            if order < MIN_ORDER {
                return Err(Failure::Usage(anyhow::anyhow!("--order must be at least {MIN_ORDER}, got {order}")));
            }
            let cert: Certification = verifier::certify_extremal_with(class, order, 0.0)
                .map_err(|e| Failure::Check(e.to_string()))?;
            report::write_json(&cert, out).context("writing output")?;
            Ok(())
        }
        Command::Sweep { class, count, seed, output } => {
            if count == 0 {
                return Err(Failure::Usage(anyhow::anyhow!("--count must be at least 1")));
            }
            let outcome = verifier::sweep(class, count, seed);
            let mut sink = open_output(&output, out)?;
            report::write_sweep_csv(&outcome.records, &mut sink).context("writing samples")?;
            sink.flush().context("writing samples")?;
            if outcome.violations > 0 {
                return Err(Failure::Check(format!(
                    "{} of {count} samples exceed the sharp value {}",
                    outcome.violations,
                    class.sharp_bound()
                )));
            }
            Ok(())
        }
    }
}
