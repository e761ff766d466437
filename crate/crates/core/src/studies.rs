//! Convergence studies over ε: one estimate per truncation level, the
//! absolute error against the exact solution, and a log-log slope fit.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::derive_stream;
use crate::montecarlo::estimate;
use crate::problems::ExampleCase;
use crate::schemes::{Scheme, SchemeConfig};

pub const CSV_HEADER: &str = "eps,abs_error,stderr,avg_steps,elapsed_seconds";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyMeta {
    pub example: String,
    pub n: usize,
    pub s: f64,
    pub scheme: Scheme,
    /// Base sample count; `n_per_eps` holds what each row actually used.
    pub n_samples: u64,
    pub n_per_eps: Vec<u64>,
    pub seed: u64,
    pub t0: f64,
    pub x0: Vec<f64>,
    pub dt_cap: Option<f64>,
    pub crn: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub eps: f64,
    pub abs_error: f64,
    pub stderr: f64,
    pub avg_steps: f64,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyTable {
    pub meta: StudyMeta,
    pub rows: Vec<StudyRow>,
    /// `None` when the fit is unavailable (fewer than two rows or a zero error).
    pub fitted_order: Option<f64>,
    pub theory_order: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Everything a study needs besides the example and base scheme settings.
#[derive(Debug, Clone, PartialEq)]
pub struct StudySettings {
    pub eps_list: Vec<f64>,
    pub t0: f64,
    pub x0: Vec<f64>,
    pub n_samples: u64,
    /// (eps, N) pairs replacing `n_samples` at matching eps.
    pub n_overrides: Vec<(f64, u64)>,
    pub seed: u64,
    pub workers: usize,
    /// Reuse the same seed at every ε instead of deriving one per row.
    pub crn: bool,
}

impl StudySettings {
    pub fn new(eps_list: Vec<f64>, t0: f64, x0: Vec<f64>, n_samples: u64, seed: u64) -> Self {
        Self {
            eps_list,
            t0,
            x0,
            n_samples,
            n_overrides: Vec::new(),
            seed,
            workers: default_workers(),
            crn: false,
        }
    }

    fn samples_for(&self, eps: f64) -> u64 {
        self.n_overrides
            .iter()
            .find(|(e, _)| (e - eps).abs() <= 1e-12 * eps.abs())
            .map_or(self.n_samples, |&(_, n)| n)
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Seed used for the k-th row (in decreasing-ε order).
pub fn row_seed(seed: u64, k: usize, crn: bool) -> u64 {
    if crn {
        seed
    } else {
        derive_stream(seed, u64::MAX - k as u64).next_u64()
    }
}

/// Predicted weak order: 2s ∧ (β ∧ 2 − 2s) for scheme 1 and
/// 2s ∧ (⌊β ∧ 3⌋ − 2s) for scheme 2.
pub fn theory_order(scheme: Scheme, s: f64, beta: f64) -> f64 {
    match scheme {
        Scheme::One => (2.0 * s).min(beta.min(2.0) - 2.0 * s),
        Scheme::Two => (2.0 * s).min(beta.min(3.0).floor() - 2.0 * s),
    }
}

/// OLS slope of ln(error) against ln(eps).
pub fn fit_order(rows: &[(f64, f64)]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::DegenerateFit("need at least two rows"));
    }
    if rows
        .iter()
        .any(|&(e, a)| !(e > 0.0 && a > 0.0 && e.is_finite() && a.is_finite()))
    {
        return Err(Error::DegenerateFit("eps and errors must be positive and finite"));
    }
    let m = rows.len() as f64;
    let (sx, sy) = rows
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(e, a)| (sx + e.ln(), sy + a.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(e, a) in rows {
        let dx = e.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (a.ln() - my);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all eps are equal"));
    }
    Ok(sxy / sxx)
}

impl StudyTable {
    fn fit(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.eps, r.abs_error)).collect();
        fit_order(&pts).ok()
    }
}

/// Runs one estimate per ε with default workers and no N overrides.
pub fn run_study(
    example: &ExampleCase,
    cfg_base: &SchemeConfig,
    eps_list: &[f64],
    t0: f64,
    x0: &[f64],
    n_samples: u64,
    seed: u64,
) -> Result<StudyTable> {
    let settings = StudySettings::new(eps_list.to_vec(), t0, x0.to_vec(), n_samples, seed);
    run_study_with(example, cfg_base, &settings)
}

pub fn run_study_with(
    example: &ExampleCase,
    cfg_base: &SchemeConfig,
    settings: &StudySettings,
) -> Result<StudyTable> {
    if settings.eps_list.is_empty() {
        return Err(Error::EmptyInput);
    }
    for &e in &settings.eps_list {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::out_of_range("eps", e, "strictly between 0 and 1"));
        }
    }
    let mut eps_list = settings.eps_list.clone();
    eps_list.sort_by(|a, b| b.total_cmp(a));

    let exact = example.exact(settings.t0, &settings.x0);
    let mut rows = Vec::with_capacity(eps_list.len());
    let mut n_per_eps = Vec::with_capacity(eps_list.len());
    for (k, &eps) in eps_list.iter().enumerate() {
        let cfg = cfg_base.with_eps(eps);
        let n = settings.samples_for(eps);
        let report = estimate(
            &example.problem,
            &cfg,
            settings.t0,
            &settings.x0,
            n,
            row_seed(settings.seed, k, settings.crn),
            settings.workers,
        )?;
        n_per_eps.push(n);
        rows.push(StudyRow {
            eps,
            abs_error: (report.mean - exact).abs(),
            stderr: report.stderr,
            avg_steps: report.avg_steps,
            elapsed_seconds: report.elapsed_seconds,
        });
    }

    let mut table = StudyTable {
        meta: StudyMeta {
            example: example.name(),
            n: example.n,
            s: example.s,
            scheme: cfg_base.scheme,
            n_samples: settings.n_samples,
            n_per_eps,
            seed: settings.seed,
            t0: settings.t0,
            x0: settings.x0.clone(),
            dt_cap: cfg_base.dt_cap,
            crn: settings.crn,
        },
        rows,
        fitted_order: None,
        theory_order: theory_order(cfg_base.scheme, example.s, example.regularity()),
    };
    table.fitted_order = table.fit();
    Ok(table)
}

pub fn to_csv(table: &StudyTable) -> Result<String> {
    let mut out = String::new();
    let meta = serde_json::to_value(&table.meta)?;
    if let serde_json::Value::Object(map) = meta {
        for (k, v) in map {
            writeln!(out, "# {k}: {v}").expect("writing to a String");
        }
    }
    writeln!(out, "# fitted_order: {}", serde_json::to_string(&table.fitted_order)?)
        .expect("writing to a String");
    writeln!(out, "# theory_order: {}", serde_json::to_string(&table.theory_order)?)
        .expect("writing to a String");
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &table.rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.eps, r.abs_error, r.stderr, r.avg_steps, r.elapsed_seconds
        )
        .expect("writing to a String");
    }
    Ok(out)
}

pub fn from_csv(text: &str) -> Result<StudyTable> {
    let mut meta = serde_json::Map::new();
    let mut fitted_order = None;
    let mut theory_order = None;
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("line {}: meta line without ':'", lineno + 1)))?;
            let value: serde_json::Value = serde_json::from_str(v.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            match k.trim() {
                "fitted_order" => fitted_order = serde_json::from_value(value)?,
                "theory_order" => theory_order = Some(serde_json::from_value(value)?),
                key => {
                    meta.insert(key.to_string(), value);
                }
            }
            continue;
        }
        if !seen_header {
            if line != CSV_HEADER {
                return Err(Error::Parse(format!("expected header '{CSV_HEADER}', got '{line}'")));
            }
            seen_header = true;
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if vals.len() != 5 {
            return Err(Error::Parse(format!(
                "line {}: expected 5 columns, got {}",
                lineno + 1,
                vals.len()
            )));
        }
        rows.push(StudyRow {
            eps: vals[0],
            abs_error: vals[1],
            stderr: vals[2],
            avg_steps: vals[3],
            elapsed_seconds: vals[4],
        });
    }
    if !seen_header {
        return Err(Error::Parse("missing column header".into()));
    }
    let meta: StudyMeta = serde_json::from_value(serde_json::Value::Object(meta))
        .map_err(|e| Error::Parse(format!("meta block: {e}")))?;
    Ok(StudyTable {
        meta,
        rows,
        fitted_order,
        theory_order: theory_order.ok_or_else(|| Error::Parse("missing theory_order".into()))?,
    })
}

pub fn to_json(table: &StudyTable) -> Result<String> {
    Ok(serde_json::to_string_pretty(table)?)
}

pub fn from_json(text: &str) -> Result<StudyTable> {
    Ok(serde_json::from_str(text)?)
}

/// Writes the table to `destination` in the given format.
pub fn emit(table: &StudyTable, format: Format, destination: &Path) -> Result<()> {
    let text = match format {
        Format::Csv => to_csv(table)?,
        Format::Json => to_json(table)?,
    };
    std::fs::write(destination, text)?;
    Ok(())
}

/// Reads a table written by [`emit`].
pub fn read_table(path: &Path, format: Format) -> Result<StudyTable> {
    let text = std::fs::read_to_string(path)?;
    match format {
        Format::Csv => from_csv(&text),
        Format::Json => from_json(&text),
    }
}
