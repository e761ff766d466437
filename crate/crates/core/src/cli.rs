//! The `fraclap` command line: `solve`, `study` and `selftest`.
//!
//! Values come from defaults, then an optional `--config` file, then flags.
//! Exit status is 0 on success, 1 for invalid input and 2 for failures
//! during sampling or I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{
    parse_real_list, Command, ProblemChoice, RunConfig, SampleOverride, X0Spec, WORKERS_ENV,
};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate, EstimatorReport};
use crate::schemes::Scheme;
use crate::studies::{emit, run_study_with, to_csv, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fraclap",
    version,
    about = "Monte Carlo solver for Dirichlet problems with the fractional Laplacian"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Estimate u(t0, x0) for each requested eps.
    Solve(RunArgs),
    /// Run a convergence study over eps and fit the order.
    Study(RunArgs),
    /// Run the built-in property checks.
    Selftest,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Flat JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
    /// example1, example2, example3i1, example3i2, example3 (with --i) or custom.
    #[arg(long)]
    example: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<f64>,
    /// Index of example 3 (1 or 2).
    #[arg(long)]
    i: Option<u8>,
    /// 1 drops small jumps; 2 replaces them by a Rademacher term.
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    /// Truncation levels, comma separated; fractions like 1/160 are accepted.
    #[arg(long)]
    eps: Option<String>,
    /// Number of sample paths.
    #[arg(long = "N", alias = "samples")]
    n_samples: Option<u64>,
    /// Per-eps sample count, EPS=N; may be repeated.
    #[arg(long = "n-at", value_name = "EPS=N")]
    n_at: Vec<String>,
    #[arg(long)]
    t0: Option<f64>,
    /// center-over-n or a comma-separated vector.
    #[arg(long)]
    x0: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the FRACLAP_WORKERS variable, then the core count.
    #[arg(long)]
    workers: Option<usize>,
    /// Cap on a single time step.
    #[arg(long)]
    dt_cap: Option<f64>,
    #[arg(long)]
    max_steps: Option<u64>,
    /// Scan resolution for exit detection along curved segments.
    #[arg(long)]
    scan_k: Option<usize>,
    /// Use the same seed for every eps of a study.
    #[arg(long)]
    crn: bool,
    /// Use the first term of example 3's source exactly as printed (exponent 2 + s for both i).
    #[arg(long)]
    strict_paper_f3: bool,
    /// Output file: study table or solve reports.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    /// Also print JSON reports to stdout.
    #[arg(long)]
    json: bool,
    /// Constant drift vector for custom problems.
    #[arg(long)]
    custom_drift: Option<String>,
    #[arg(long)]
    custom_potential: Option<f64>,
    #[arg(long)]
    custom_source: Option<f64>,
    #[arg(long)]
    custom_terminal: Option<f64>,
    #[arg(long)]
    custom_exterior: Option<f64>,
    #[arg(long)]
    custom_radius: Option<f64>,
    #[arg(long)]
    custom_horizon: Option<f64>,
}

fn parse_scheme(text: &str) -> std::result::Result<Scheme, String> {
    match text.trim() {
        "1" | "scheme1" => Ok(Scheme::One),
        "2" | "scheme2" => Ok(Scheme::Two),
        other => Err(format!("expected 1 or 2, got '{other}'")),
    }
}

fn parse_format(text: &str) -> std::result::Result<Format, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(format!("expected csv or json, got '{other}'")),
    }
}

impl RunArgs {
    fn resolve(&self, command: Command) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        c.command = command;
        if let Some(v) = &self.example {
            c.example = v.clone();
        }
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.s {
            c.s = v;
        }
        if self.i.is_some() {
            c.i = self.i;
        }
        if let Some(v) = self.scheme {
            c.scheme = v;
        }
        if let Some(v) = &self.eps {
            c.eps = parse_real_list(v)?;
        }
        if let Some(v) = self.n_samples {
            c.n_samples = v;
        }
        if !self.n_at.is_empty() {
            c.n_overrides = self
                .n_at
                .iter()
                .map(|t| SampleOverride::parse(t))
                .collect::<Result<_>>()?;
        }
        if let Some(v) = self.t0 {
            c.t0 = v;
        }
        if let Some(v) = &self.x0 {
            c.x0 = X0Spec::parse(v)?;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if self.workers.is_some() {
            c.workers = self.workers;
        }
        if self.dt_cap.is_some() {
            c.dt_cap = self.dt_cap;
        }
        if let Some(v) = self.max_steps {
            c.max_steps = v;
        }
        if let Some(v) = self.scan_k {
            c.scan_k = v;
        }
        c.crn |= self.crn;
        c.strict_paper_f3 |= self.strict_paper_f3;
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        if self.format.is_some() {
            c.format = self.format;
        }
        c.json |= self.json;
        if let Some(v) = &self.custom_drift {
            c.custom_drift = parse_real_list(v)?;
        }
        for (flag, field) in [
            (self.custom_potential, &mut c.custom_potential),
            (self.custom_source, &mut c.custom_source),
            (self.custom_terminal, &mut c.custom_terminal),
            (self.custom_exterior, &mut c.custom_exterior),
            (self.custom_radius, &mut c.custom_radius),
            (self.custom_horizon, &mut c.custom_horizon),
        ] {
            if let Some(v) = flag {
                *field = v;
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Serialize)]
struct SolveRecord<'a> {
    example: &'a str,
    n: usize,
    s: f64,
    scheme: Scheme,
    eps: f64,
    t0: f64,
    exact: Option<f64>,
    abs_error: Option<f64>,
    #[serde(flatten)]
    report: EstimatorReport,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_RUNTIME
    }
}

fn solve(c: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let choice = c.build_problem()?;
    let x0 = c.x0.resolve(c.n)?;
    let workers = c.resolved_workers()?;
    let exact = match &choice {
        ProblemChoice::Example(ex) => Some(ex.exact(c.t0, &x0)),
        ProblemChoice::Custom(_) => None,
    };
    let mut records = Vec::with_capacity(c.eps.len());
    for &eps in &c.eps {
        let report = estimate(
            choice.problem(),
            &c.scheme_config(eps),
            c.t0,
            &x0,
            c.samples_for(eps),
            c.seed,
            workers,
        )?;
        let abs_error = exact.map(|u| (report.mean - u).abs());
        writeln!(
            out,
            "{} n={} s={} scheme={} eps={} N={}: mean={:.10e} stderr={:.4e} avg_steps={:.4} elapsed={:.3}s",
            c.example, c.n, c.s, c.scheme, eps, report.n_samples, report.mean, report.stderr,
            report.avg_steps, report.elapsed_seconds
        )?;
        if let (Some(u), Some(err)) = (exact, abs_error) {
            writeln!(out, "  exact={u:.10e} abs_error={err:.4e}")?;
        }
        records.push(SolveRecord {
            example: &c.example,
            n: c.n,
            s: c.s,
            scheme: c.scheme,
            eps,
            t0: c.t0,
            exact,
            abs_error,
            report,
        });
    }
    if c.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&records)?)?;
    }
    if let Some(path) = &c.out {
        std::fs::write(path, serde_json::to_string_pretty(&records)?)?;
    }
    Ok(())
}

fn study(c: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let ProblemChoice::Example(ex) = c.build_problem()? else {
        return Err(Error::Config("study needs a worked example".into()));
    };
    let table = run_study_with(&ex, &c.scheme_config(c.eps[0]), &c.study_settings()?)?;
    match &c.out {
        Some(path) => {
            let format = c.format.unwrap_or_else(|| Format::from_path(path));
            emit(&table, format, path)?;
            writeln!(out, "wrote {} rows to {}", table.rows.len(), path.display())?;
        }
        None => match c.format.unwrap_or(Format::Csv) {
            Format::Csv => write!(out, "{}", to_csv(&table)?)?,
            Format::Json => writeln!(out, "{}", crate::studies::to_json(&table)?)?,
        },
    }
    match table.fitted_order {
        Some(k) => writeln!(
            out,
            "fitted order {k:.4} (theory {:.4})",
            table.theory_order
        )?,
        None => writeln!(
            out,
            "fitted order unavailable (theory {:.4})",
            table.theory_order
        )?,
    }
    Ok(())
}

fn selftest(out: &mut dyn Write) -> Result<bool> {
    let mut all = true;
    for c in crate::selftest::run_all() {
        all &= c.passed;
        writeln!(
            out,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )?;
    }
    Ok(all)
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status. Normal output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };

    let (command, args) = match &cli.command {
        Cmd::Solve(a) => (Command::Solve, a),
        Cmd::Study(a) => (Command::Study, a),
        Cmd::Selftest => {
            return match selftest(out) {
                Ok(true) => EXIT_OK,
                Ok(false) => {
                    let _ = writeln!(err, "error: selftest failed");
                    EXIT_RUNTIME
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_RUNTIME
                }
            };
        }
    };

    let config = match args.resolve(command).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VALIDATION;
        }
    };
    if args.dump_config {
        return match config.to_json() {
            Ok(text) => {
                let _ = writeln!(out, "{text}");
                EXIT_OK
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_RUNTIME
            }
        };
    }

    let result = match command {
        Command::Solve => solve(&config, out),
        Command::Study => study(&config, out),
        Command::Selftest => unreachable!("handled above"),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::MaxSteps { .. }) {
                let _ = writeln!(
                    err,
                    "hint: raise --max-steps or use a larger --eps; {WORKERS_ENV} does not affect this"
                );
            }
            exit_code(&e)
        }
    }
}

/// Entry point for the binary: uses the process arguments and standard streams.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
