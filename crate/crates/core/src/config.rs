//! Run configuration shared by the command-line front end and config files.
//!
//! A config file is a flat JSON object whose keys are the fields of
//! [`RunConfig`]; any subset may be given and the rest take their defaults.
//! `--dump-config` prints the fully resolved object in the same form.

use std::path::PathBuf;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::problems::{build_example, constant_problem, ExampleCase, ExampleId, ProblemSpec};
use crate::schemes::{Scheme, SchemeConfig, DEFAULT_MAX_STEPS};
use crate::geometry::DEFAULT_SCAN_K;
use crate::studies::{Format, StudySettings};

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "FRACLAP_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Study,
    Selftest,
}

/// Starting point: `"center-over-n"` means (1/n, …, 1/n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum X0Spec {
    Named(String),
    Explicit(Vec<f64>),
}

impl X0Spec {
    pub fn resolve(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            X0Spec::Named(name) if name == "center-over-n" => Ok(vec![1.0 / n as f64; n]),
            X0Spec::Named(other) => Err(Error::Config(format!(
                "unknown x0 '{other}' (use center-over-n or a comma-separated vector)"
            ))),
            X0Spec::Explicit(v) if v.len() == n => Ok(v.clone()),
            X0Spec::Explicit(v) => Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            }),
        }
    }

    /// Parses `center-over-n` or a comma-separated list of reals.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "center-over-n" {
            return Ok(X0Spec::Named(t.to_string()));
        }
        Ok(X0Spec::Explicit(parse_real_list(t)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOverride {
    #[serde(deserialize_with = "de_real")]
    pub eps: f64,
    #[serde(rename = "N")]
    pub n_samples: u64,
}

impl SampleOverride {
    /// Parses `EPS=N`, e.g. `1/32=40000`.
    pub fn parse(text: &str) -> Result<Self> {
        let (e, n) = text
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected EPS=N, got '{text}'")))?;
        let n_samples = n
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Config(format!("bad sample count in '{text}'")))?;
        Ok(Self {
            eps: parse_real(e)?,
            n_samples,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// example1, example2, example3i1, example3i2, example3 (with `i`) or custom.
    pub example: String,
    pub i: Option<u8>,
    pub scheme: Scheme,
    pub n: usize,
    pub s: f64,
    #[serde(deserialize_with = "de_real_list")]
    pub eps: Vec<f64>,
    #[serde(rename = "N")]
    pub n_samples: u64,
    pub n_overrides: Vec<SampleOverride>,
    pub t0: f64,
    pub x0: X0Spec,
    pub seed: u64,
    /// Resolved from the environment when absent.
    pub workers: Option<usize>,
    pub dt_cap: Option<f64>,
    pub max_steps: u64,
    pub scan_k: usize,
    pub crn: bool,
    pub strict_paper_f3: bool,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub json: bool,
    /// Constant coefficients for `example = "custom"`; empty drift means zero.
    pub custom_drift: Vec<f64>,
    pub custom_potential: f64,
    pub custom_source: f64,
    pub custom_terminal: f64,
    pub custom_exterior: f64,
    pub custom_radius: f64,
    pub custom_horizon: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Solve,
            example: "example1".into(),
            i: None,
            scheme: Scheme::One,
            n: 2,
            s: 0.5,
            eps: vec![1.0 / 40.0],
            n_samples: 10_000,
            n_overrides: Vec::new(),
            t0: 0.5,
            x0: X0Spec::Named("center-over-n".into()),
            seed: 42,
            workers: None,
            dt_cap: None,
            max_steps: DEFAULT_MAX_STEPS,
            scan_k: DEFAULT_SCAN_K,
            crn: false,
            strict_paper_f3: false,
            out: None,
            format: None,
            json: false,
            custom_drift: Vec::new(),
            custom_potential: 0.0,
            custom_source: 0.0,
            custom_terminal: 0.0,
            custom_exterior: 0.0,
            custom_radius: 1.0,
            custom_horizon: 1.0,
        }
    }
}

/// The problem a config refers to.
pub enum ProblemChoice {
    Example(Box<ExampleCase>),
    Custom(ProblemSpec),
}

impl ProblemChoice {
    pub fn problem(&self) -> &ProblemSpec {
        match self {
            ProblemChoice::Example(ex) => &ex.problem,
            ProblemChoice::Custom(p) => p,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolved_workers(&self) -> Result<usize> {
        if let Some(w) = self.workers {
            return Ok(w);
        }
        match std::env::var(WORKERS_ENV) {
            Ok(v) => v.trim().parse::<usize>().map_err(|_| {
                Error::Config(format!("{WORKERS_ENV} must be a positive integer, got '{v}'"))
            }),
            Err(_) => Ok(crate::studies::default_workers()),
        }
    }

    pub fn example_id(&self) -> Result<Option<ExampleId>> {
        match self.example.as_str() {
            "custom" => Ok(None),
            "example3" => {
                let i = self.i.ok_or_else(|| {
                    Error::Config("example3 needs --i 1 or --i 2 (or use example3i1/example3i2)".into())
                })?;
                if !(i == 1 || i == 2) {
                    return Err(Error::Config(format!("--i must be 1 or 2, got {i}")));
                }
                Ok(Some(ExampleId::Example3 { i }))
            }
            name => {
                let id = ExampleId::parse(name)?;
                if let (ExampleId::Example3 { i }, Some(j)) = (id, self.i) {
                    if i != j {
                        return Err(Error::Config(format!("{name} conflicts with --i {j}")));
                    }
                }
                Ok(Some(id))
            }
        }
    }

    pub fn scheme_config(&self, eps: f64) -> SchemeConfig {
        SchemeConfig {
            scheme: self.scheme,
            eps,
            dt_cap: self.dt_cap,
            max_steps: self.max_steps,
            scan_k: self.scan_k,
            sigma_override: None,
        }
    }

    pub fn build_problem(&self) -> Result<ProblemChoice> {
        match self.example_id()? {
            Some(id) => Ok(ProblemChoice::Example(Box::new(build_example(
                id,
                self.n,
                self.s,
                self.strict_paper_f3,
            )?))),
            None => {
                let drift = if self.custom_drift.is_empty() {
                    vec![0.0; self.n]
                } else {
                    self.custom_drift.clone()
                };
                let domain = Domain::ball(vec![0.0; self.n], self.custom_radius)?;
                Ok(ProblemChoice::Custom(constant_problem(
                    self.n,
                    self.s,
                    self.custom_horizon,
                    domain,
                    &drift,
                    self.custom_potential,
                    self.custom_source,
                    self.custom_terminal,
                    self.custom_exterior,
                )?))
            }
        }
    }

    /// Checks every field against the preconditions of the modules it feeds.
    pub fn validate(&self) -> Result<()> {
        if self.command == Command::Selftest {
            return Ok(());
        }
        if self.n == 0 {
            return Err(Error::out_of_range("n", 0.0, "a positive dimension"));
        }
        crate::specfun::check_index(self.s)?;
        if self.eps.is_empty() {
            return Err(Error::Config("--eps needs at least one value".into()));
        }
        for &e in &self.eps {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::out_of_range("eps", e, "strictly between 0 and 1"));
            }
        }
        if self.n_samples == 0 || self.n_overrides.iter().any(|o| o.n_samples == 0) {
            return Err(Error::out_of_range("N", 0.0, "at least 1"));
        }
        if self.resolved_workers()? == 0 {
            return Err(Error::out_of_range("workers", 0.0, "at least 1"));
        }
        self.scheme_config(self.eps[0]).validate()?;
        let choice = self.build_problem()?;
        let p = choice.problem();
        if !(self.t0 >= 0.0 && self.t0 < p.horizon()) {
            return Err(Error::out_of_range("t0", self.t0, "within [0, T)"));
        }
        let x0 = self.x0.resolve(self.n)?;
        if !p.domain().contains(&x0)? {
            return Err(Error::StartOutsideDomain);
        }
        if self.command == Command::Study && matches!(choice, ProblemChoice::Custom(_)) {
            return Err(Error::Config(
                "study needs a worked example with a known solution, not custom".into(),
            ));
        }
        Ok(())
    }

    pub fn study_settings(&self) -> Result<StudySettings> {
        Ok(StudySettings {
            eps_list: self.eps.clone(),
            t0: self.t0,
            x0: self.x0.resolve(self.n)?,
            n_samples: self.n_samples,
            n_overrides: self.n_overrides.iter().map(|o| (o.eps, o.n_samples)).collect(),
            seed: self.seed,
            workers: self.resolved_workers()?,
            crn: self.crn,
        })
    }

    pub fn samples_for(&self, eps: f64) -> u64 {
        self.n_overrides
            .iter()
            .find(|o| (o.eps - eps).abs() <= 1e-12 * eps)
            .map_or(self.n_samples, |o| o.n_samples)
    }
}

/// Parses a real or a fraction literal such as `1/160`; the fraction is the
/// correctly rounded quotient of its two parts.
pub fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::Config(format!("cannot parse '{t}' as a number or fraction"));
    let value = match t.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0.0 {
                return Err(Error::Config(format!("division by zero in '{t}'")));
            }
            a / b
        }
        None => t.parse().map_err(|_| bad())?,
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

/// Comma-separated list of reals or fractions.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_real)
        .collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RealOrText {
    Real(f64),
    Text(String),
}

impl RealOrText {
    fn value(self) -> Result<f64> {
        match self {
            RealOrText::Real(v) => Ok(v),
            RealOrText::Text(t) => parse_real(&t),
        }
    }
}

fn de_real<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    RealOrText::deserialize(d)?
        .value()
        .map_err(serde::de::Error::custom)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RealList {
    One(RealOrText),
    Many(Vec<RealOrText>),
}

fn de_real_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    let items = match RealList::deserialize(d)? {
        RealList::One(RealOrText::Text(t)) => {
            return parse_real_list(&t).map_err(serde::de::Error::custom)
        }
        RealList::One(v) => vec![v],
        RealList::Many(v) => v,
    };
    items
        .into_iter()
        .map(|v| v.value().map_err(serde::de::Error::custom))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_parse_to_quotient() {
        assert_eq!(parse_real("1/160").unwrap(), 1.0 / 160.0);
        assert_eq!(parse_real(" 3 / 4 ").unwrap(), 0.75);
        assert_eq!(parse_real("0.025").unwrap(), 0.025);
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("abc").is_err());
        assert_eq!(
            parse_real_list("1/10,1/20,1/40").unwrap(),
            vec![0.1, 1.0 / 20.0, 1.0 / 40.0]
        );
    }

    #[test]
    fn config_round_trip() {
        let mut c = RunConfig {
            eps: vec![0.1, 1.0 / 160.0],
            n_overrides: vec![SampleOverride {
                eps: 1.0 / 32.0,
                n_samples: 40_000,
            }],
            x0: X0Spec::Explicit(vec![0.1, 0.2]),
            dt_cap: Some(0.01),
            ..Default::default()
        };
        c.workers = Some(3);
        let back = RunConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
        let d = RunConfig::default();
        assert_eq!(RunConfig::from_json(&d.to_json().unwrap()).unwrap(), d);
    }

    #[test]
    fn partial_config_with_fraction_strings() {
        let c = RunConfig::from_json(r#"{"eps": ["1/10", 0.05], "N": 7, "scheme": 2}"#).unwrap();
        assert_eq!(c.eps, vec![0.1, 0.05]);
        assert_eq!(c.n_samples, 7);
        assert_eq!(c.scheme, Scheme::Two);
        let c = RunConfig::from_json(r#"{"eps": "1/10,1/20"}"#).unwrap();
        assert_eq!(c.eps, vec![0.1, 0.05]);
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn x0_specs() {
        assert_eq!(X0Spec::parse("center-over-n").unwrap().resolve(4).unwrap(), vec![0.25; 4]);
        assert_eq!(X0Spec::parse("0.1,0.2").unwrap().resolve(2).unwrap(), vec![0.1, 0.2]);
        assert!(X0Spec::parse("0.1,0.2").unwrap().resolve(3).is_err());
        assert!(X0Spec::Named("corner".into()).resolve(2).is_err());
    }

    #[test]
    fn validation_catches_bad_fields() {
        let ok = RunConfig {
            workers: Some(1),
            ..Default::default()
        };
        assert!(ok.validate().is_ok());
        for bad in [
            RunConfig { s: 1.2, ..ok.clone() },
            RunConfig { eps: vec![], ..ok.clone() },
            RunConfig { eps: vec![2.0], ..ok.clone() },
            RunConfig { example: "example9".into(), ..ok.clone() },
            RunConfig { example: "example3".into(), ..ok.clone() },
            RunConfig { x0: X0Spec::Explicit(vec![0.9, 0.9]), ..ok.clone() },
            RunConfig { t0: 1.0, ..ok.clone() },
            RunConfig { n_samples: 0, ..ok.clone() },
            RunConfig { workers: Some(0), ..ok.clone() },
            RunConfig { command: Command::Study, example: "custom".into(), ..ok.clone() },
        ] {
            let err = bad.validate().unwrap_err();
            assert!(err.is_validation(), "{err}");
        }
    }

    #[test]
    fn example3_index_forms() {
        let c = RunConfig {
            example: "example3".into(),
            i: Some(2),
            ..Default::default()
        };
        assert_eq!(c.example_id().unwrap(), Some(ExampleId::Example3 { i: 2 }));
        let c = RunConfig {
            example: "example3i1".into(),
            i: Some(2),
            ..Default::default()
        };
        assert!(c.example_id().is_err());
    }
}
