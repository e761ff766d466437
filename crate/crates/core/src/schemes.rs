//! Jump-adapted path simulators.
//!
//! Between the jump times of the truncated process the state follows a
//! deterministic drift segment (scheme 1) or a drift segment plus a
//! Rademacher-scaled √Δ term standing in for the removed small jumps
//! (scheme 2). Exit from the domain is detected continuously along each
//! segment. The weights follow the Euler updates
//!
//! ```text
//! Y ← Y (1 + c(τᵢ, xᵢ) Δ),   Z ← Z + f(τᵢ, xᵢ) Y Δ
//! ```
//!
//! with coefficients frozen at the start of the segment, including the
//! final segment that is cut short by the boundary or the horizon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{curve_point, line_point, Domain, DEFAULT_SCAN_K};
use crate::levy::{
    sample_jump_into, sample_jump_time, sample_rademacher_into, RngStream, StableNoiseParams,
};
use crate::problems::{Orientation, ProblemSpec, SteadyProblemSpec};

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Scheme {
    /// Small jumps dropped.
    One,
    /// Small jumps replaced by a matched-variance Rademacher term.
    Two,
}

impl TryFrom<u8> for Scheme {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Scheme::One),
            2 => Ok(Scheme::Two),
            other => Err(format!("scheme must be 1 or 2, got {other}")),
        }
    }
}

impl From<Scheme> for u8 {
    fn from(s: Scheme) -> u8 {
        match s {
            Scheme::One => 1,
            Scheme::Two => 2,
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub eps: f64,
    /// Upper bound on a single segment; the pending jump time is kept.
    pub dt_cap: Option<f64>,
    pub max_steps: u64,
    pub scan_k: usize,
    /// Replaces σ̄_ε in scheme 2. Mainly for testing the σ̄ = 0 reduction.
    pub sigma_override: Option<f64>,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, eps: f64) -> Self {
        Self {
            scheme,
            eps,
            dt_cap: None,
            max_steps: DEFAULT_MAX_STEPS,
            scan_k: DEFAULT_SCAN_K,
            sigma_override: None,
        }
    }

    pub fn scheme1(eps: f64) -> Self {
        Self::new(Scheme::One, eps)
    }

    pub fn scheme2(eps: f64) -> Self {
        Self::new(Scheme::Two, eps)
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_dt_cap(mut self, cap: Option<f64>) -> Self {
        self.dt_cap = cap;
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::out_of_range("eps", self.eps, "strictly between 0 and 1"));
        }
        if let Some(cap) = self.dt_cap {
            if !(cap > 0.0 && cap.is_finite()) {
                return Err(Error::out_of_range("dt_cap", cap, "positive and finite"));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::out_of_range("max_steps", 0.0, "at least 1"));
        }
        if self.scan_k == 0 {
            return Err(Error::out_of_range("scan_k", 0.0, "at least 1"));
        }
        if let Some(sig) = self.sigma_override {
            if !(sig >= 0.0 && sig.is_finite()) {
                return Err(Error::out_of_range("sigma_override", sig, "non-negative and finite"));
            }
        }
        Ok(())
    }
}

/// Snapshot of a path, reported when a path runs out of steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathState {
    pub t: f64,
    pub x: Vec<f64>,
    pub y: f64,
    pub z: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    DriftExit,
    JumpExit,
    Horizon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathOutcome {
    pub stop_time: f64,
    pub stop_x: Vec<f64>,
    pub y: f64,
    pub z: f64,
    pub payoff: f64,
    /// Jump times drawn, including the last one that was cut short.
    pub steps: u64,
    pub stop_reason: StopReason,
}

/// What the path engine needs from a problem.
pub trait PathModel: Send + Sync {
    fn dim(&self) -> usize;
    fn s(&self) -> f64;
    fn domain(&self) -> &Domain;
    /// `None` for steady problems.
    fn horizon(&self) -> Option<f64>;
    fn has_drift(&self) -> bool;
    /// Writes b(t, x) and returns (c(t, x), f(t, x)).
    fn coefficients(&self, t: f64, x: &[f64], b: &mut [f64]) -> (f64, f64);
    fn exit_value(&self, t: f64, x: &[f64]) -> f64;
    fn terminal_value(&self, x: &[f64]) -> f64;
}

impl PathModel for ProblemSpec {
    fn dim(&self) -> usize {
        self.n()
    }
    fn s(&self) -> f64 {
        ProblemSpec::s(self)
    }
    fn domain(&self) -> &Domain {
        ProblemSpec::domain(self)
    }
    fn horizon(&self) -> Option<f64> {
        Some(ProblemSpec::horizon(self))
    }
    fn has_drift(&self) -> bool {
        ProblemSpec::has_drift(self)
    }
    #[inline]
    fn coefficients(&self, t: f64, x: &[f64], b: &mut [f64]) -> (f64, f64) {
        self.drift(t, x, b);
        (self.potential(t, x), self.source(t, x))
    }
    #[inline]
    fn exit_value(&self, t: f64, x: &[f64]) -> f64 {
        self.exterior(t, x)
    }
    #[inline]
    fn terminal_value(&self, x: &[f64]) -> f64 {
        self.terminal(x)
    }
}

impl PathModel for SteadyProblemSpec {
    fn dim(&self) -> usize {
        self.n()
    }
    fn s(&self) -> f64 {
        SteadyProblemSpec::s(self)
    }
    fn domain(&self) -> &Domain {
        SteadyProblemSpec::domain(self)
    }
    fn horizon(&self) -> Option<f64> {
        None
    }
    fn has_drift(&self) -> bool {
        SteadyProblemSpec::has_drift(self)
    }
    #[inline]
    fn coefficients(&self, _t: f64, x: &[f64], b: &mut [f64]) -> (f64, f64) {
        self.drift(x, b);
        (self.potential(x), self.source(x))
    }
    #[inline]
    fn exit_value(&self, _t: f64, x: &[f64]) -> f64 {
        self.exterior(x)
    }
    #[inline]
    fn terminal_value(&self, x: &[f64]) -> f64 {
        self.exterior(x)
    }
}

/// Scratch buffers reused across paths.
#[derive(Debug, Clone)]
pub struct Workspace {
    x: Vec<f64>,
    next: Vec<f64>,
    b: Vec<f64>,
    w: Vec<f64>,
    jump: Vec<f64>,
    scratch: Vec<f64>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Self {
            x: vec![0.0; n],
            next: vec![0.0; n],
            b: vec![0.0; n],
            w: vec![0.0; n],
            jump: vec![0.0; n],
            scratch: vec![0.0; n],
        }
    }

    fn ensure(&mut self, n: usize) {
        if self.x.len() != n {
            *self = Self::new(n);
        }
    }
}

enum SegmentEnd {
    Jump,
    Horizon,
    Cap,
}

/// A model paired with a scheme configuration and its precomputed
/// sampling constants.
#[derive(Debug, Clone)]
pub struct PathSimulator<M> {
    model: M,
    cfg: SchemeConfig,
    params: StableNoiseParams,
    sigma: f64,
}

impl<M: PathModel> PathSimulator<M> {
    pub fn new(model: M, cfg: SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        let params = StableNoiseParams::new(model.dim(), model.s(), cfg.eps)?;
        let sigma = match cfg.scheme {
            Scheme::One => 0.0,
            Scheme::Two => cfg.sigma_override.unwrap_or(params.sigma_bar),
        };
        Ok(Self {
            model,
            cfg,
            params,
            sigma,
        })
    }

    pub fn params(&self) -> &StableNoiseParams {
        &self.params
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    /// Checks the starting point without simulating anything.
    pub fn check_start(&self, t0: f64, x0: &[f64]) -> Result<()> {
        let n = self.model.dim();
        if x0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x0.len(),
            });
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("starting point has non-finite entries".into()));
        }
        if let Some(big_t) = self.model.horizon() {
            if !(t0 >= 0.0 && t0 <= big_t) {
                return Err(Error::out_of_range("t0", t0, "within [0, T]"));
            }
        }
        if !self.model.domain().is_inside(x0) {
            return Err(Error::StartOutsideDomain);
        }
        Ok(())
    }

    /// Simulates one path from (t0, x0). For time-dependent problems t0 is
    /// in terminal-value time; steady problems ignore it except as the
    /// clock origin.
    pub fn run(
        &self,
        t0: f64,
        x0: &[f64],
        rng: &mut RngStream,
        ws: &mut Workspace,
    ) -> Result<PathOutcome> {
        self.check_start(t0, x0)?;
        ws.ensure(x0.len());
        self.run_unchecked(t0, x0, rng, ws)
    }

    pub(crate) fn run_unchecked(
        &self,
        t0: f64,
        x0: &[f64],
        rng: &mut RngStream,
        ws: &mut Workspace,
    ) -> Result<PathOutcome> {
        let model = &self.model;
        let domain = model.domain();
        let horizon = model.horizon();
        let use_noise = self.sigma > 0.0;
        let trace_drift = model.has_drift();
        let scan_k = self.cfg.scan_k;

        ws.x.copy_from_slice(x0);
        let mut t = t0;
        let mut y = 1.0;
        let mut z = 0.0;
        let mut steps: u64 = 0;
        let mut wait = 0.0;
        let mut need_wait = true;

        if horizon == Some(t0) {
            return Ok(self.finish(ws, t0, y, z, 0, StopReason::Horizon));
        }

        loop {
            if need_wait {
                if steps >= self.cfg.max_steps {
                    return Err(Error::MaxSteps {
                        path: None,
                        max_steps: self.cfg.max_steps,
                        state: Box::new(PathState {
                            t,
                            x: ws.x.clone(),
                            y,
                            z,
                            steps,
                        }),
                    });
                }
                wait = sample_jump_time(rng, &self.params);
                steps += 1;
                need_wait = false;
            }

            let mut delta = wait;
            let mut end = SegmentEnd::Jump;
            if let Some(big_t) = horizon {
                let left = big_t - t;
                if left <= delta {
                    delta = left;
                    end = SegmentEnd::Horizon;
                }
            }
            if let Some(cap) = self.cfg.dt_cap {
                if cap < delta {
                    delta = cap;
                    end = SegmentEnd::Cap;
                }
            }

            let (c, f) = model.coefficients(t, &ws.x, &mut ws.b);
            if use_noise {
                sample_rademacher_into(rng, &mut ws.w);
                ws.w.iter_mut().for_each(|v| *v *= self.sigma);
            }

            let exit = if use_noise {
                domain.first_exit_sqrt_with(&ws.x, &ws.b, &ws.w, delta, scan_k, &mut ws.scratch)
            } else if trace_drift {
                domain.first_exit_linear_with(&ws.x, &ws.b, delta, scan_k, &mut ws.scratch)
            } else {
                None
            };
            let step = exit.unwrap_or(delta);

            if use_noise {
                curve_point(&ws.x, &ws.b, &ws.w, step, &mut ws.next);
            } else {
                line_point(&ws.x, &ws.b, step, &mut ws.next);
            }
            std::mem::swap(&mut ws.x, &mut ws.next);
            z += f * y * step;
            y *= 1.0 + c * step;

            if exit.is_some() {
                t += step;
                return Ok(self.finish(ws, t, y, z, steps, StopReason::DriftExit));
            }

            match end {
                SegmentEnd::Horizon => {
                    let big_t = horizon.unwrap_or(t + step);
                    return Ok(self.finish(ws, big_t, y, z, steps, StopReason::Horizon));
                }
                SegmentEnd::Cap => {
                    t += step;
                    wait -= step;
                }
                SegmentEnd::Jump => {
                    t += step;
                    need_wait = true;
                    sample_jump_into(rng, &self.params, &mut ws.jump);
                    for (xi, ji) in ws.x.iter_mut().zip(&ws.jump) {
                        *xi += ji;
                    }
                    if !domain.is_inside(&ws.x) {
                        return Ok(self.finish(ws, t, y, z, steps, StopReason::JumpExit));
                    }
                }
            }
        }
    }

    fn finish(
        &self,
        ws: &Workspace,
        t: f64,
        y: f64,
        z: f64,
        steps: u64,
        reason: StopReason,
    ) -> PathOutcome {
        let data = match reason {
            StopReason::Horizon => self.model.terminal_value(&ws.x),
            StopReason::DriftExit | StopReason::JumpExit => self.model.exit_value(t, &ws.x),
        };
        PathOutcome {
            stop_time: t,
            stop_x: ws.x.clone(),
            y,
            z,
            payoff: data * y + z,
            steps,
            stop_reason: reason,
        }
    }
}

fn terminal_form(p: &ProblemSpec) -> Result<ProblemSpec> {
    match p.orientation() {
        Orientation::TerminalValue => Ok(p.clone()),
        Orientation::InitialValue => Err(Error::Config(
            "path simulators take the terminal-value form; call reverse_time first".into(),
        )),
    }
}

fn single_path<M: PathModel>(
    model: M,
    cfg: SchemeConfig,
    t0: f64,
    x0: &[f64],
    rng: &mut RngStream,
) -> Result<PathOutcome> {
    let sim = PathSimulator::new(model, cfg)?;
    let mut ws = Workspace::new(x0.len());
    sim.run(t0, x0, rng, &mut ws)
}

/// One path of scheme 1, whatever `cfg.scheme` says.
pub fn simulate_path_scheme1(
    p: &ProblemSpec,
    cfg: &SchemeConfig,
    t0: f64,
    x0: &[f64],
    rng: &mut RngStream,
) -> Result<PathOutcome> {
    let cfg = SchemeConfig {
        scheme: Scheme::One,
        ..*cfg
    };
    single_path(terminal_form(p)?, cfg, t0, x0, rng)
}

/// One path of scheme 2, whatever `cfg.scheme` says.
pub fn simulate_path_scheme2(
    p: &ProblemSpec,
    cfg: &SchemeConfig,
    t0: f64,
    x0: &[f64],
    rng: &mut RngStream,
) -> Result<PathOutcome> {
    let cfg = SchemeConfig {
        scheme: Scheme::Two,
        ..*cfg
    };
    single_path(terminal_form(p)?, cfg, t0, x0, rng)
}

/// One path of the scheme selected in `cfg`.
pub fn simulate_path(
    p: &ProblemSpec,
    cfg: &SchemeConfig,
    t0: f64,
    x0: &[f64],
    rng: &mut RngStream,
) -> Result<PathOutcome> {
    single_path(terminal_form(p)?, *cfg, t0, x0, rng)
}

/// One path for the steady problem: stepping until exit, no horizon.
pub fn simulate_path_steady(
    p: &SteadyProblemSpec,
    cfg: &SchemeConfig,
    x0: &[f64],
    rng: &mut RngStream,
) -> Result<PathOutcome> {
    single_path(p.clone(), *cfg, 0.0, x0, rng)
}
