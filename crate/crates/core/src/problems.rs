//! Problem definitions: coefficients, terminal and exterior data, and the
//! three manufactured-solution examples on the unit ball.
//!
//! A [`ProblemSpec`] in terminal-value orientation describes
//!
//! ```text
//! ∂u/∂t − (−Δ)^s u + b·∇u + c u + f = 0   in [0, T) × D
//! u(T, x) = g(x)                           in D
//! u(t, x) = χ(t, x)                        in [0, T] × (ℝⁿ \ D)
//! ```
//!
//! The initial-value orientation is the same problem after t ↦ T − t, see
//! [`ProblemSpec::reverse_time`].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::specfun::{
    beta_fn, check_index, gamma_fn, hyp2f1_terminating, stable_constant,
};

pub type ScalarFn = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
pub type DriftFn = Arc<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>;
pub type SpatialFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type SpatialDriftFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Data given at the final time T; the form the path simulators consume.
    TerminalValue,
    /// Data given at t = 0, obtained from the terminal form by t ↦ T − t.
    InitialValue,
}

/// A parabolic Dirichlet problem. Coefficients are pure callbacks and may be
/// called concurrently from many paths.
#[derive(Clone)]
pub struct ProblemSpec {
    n: usize,
    s: f64,
    horizon: f64,
    domain: Domain,
    drift: Option<DriftFn>,
    potential: Option<ScalarFn>,
    source: Option<ScalarFn>,
    terminal: SpatialFn,
    exterior: ScalarFn,
    orientation: Orientation,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("n", &self.n)
            .field("s", &self.s)
            .field("horizon", &self.horizon)
            .field("domain", &self.domain)
            .field("has_drift", &self.drift.is_some())
            .field("has_potential", &self.potential.is_some())
            .field("has_source", &self.source.is_some())
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl ProblemSpec {
    /// A problem with b = c = f = 0; attach coefficients with the `with_*` methods.
    pub fn new<G, X>(
        n: usize,
        s: f64,
        horizon: f64,
        domain: Domain,
        terminal: G,
        exterior: X,
    ) -> Result<Self>
    where
        G: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        X: Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
    {
        check_index(s)?;
        if n == 0 {
            return Err(Error::out_of_range("n", 0.0, "a positive dimension"));
        }
        if domain.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: domain.dim(),
            });
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::out_of_range("T", horizon, "positive and finite"));
        }
        Ok(Self {
            n,
            s,
            horizon,
            domain,
            drift: None,
            potential: None,
            source: None,
            terminal: Arc::new(terminal),
            exterior: Arc::new(exterior),
            orientation: Orientation::TerminalValue,
        })
    }

    pub fn with_drift<B>(mut self, b: B) -> Self
    where
        B: Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'static,
    {
        self.drift = Some(Arc::new(b));
        self
    }

    pub fn with_potential<C>(mut self, c: C) -> Self
    where
        C: Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
    {
        self.potential = Some(Arc::new(c));
        self
    }

    pub fn with_source<F>(mut self, f: F) -> Self
    where
        F: Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
    {
        self.source = Some(Arc::new(f));
        self
    }

    /// Marks the callbacks as describing the initial-value form.
    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn has_drift(&self) -> bool {
        self.drift.is_some()
    }

    pub fn has_potential(&self) -> bool {
        self.potential.is_some()
    }

    /// Writes b(t, x) into `out`; zero when no drift is attached.
    #[inline]
    pub fn drift(&self, t: f64, x: &[f64], out: &mut [f64]) {
        match &self.drift {
            Some(b) => b(t, x, out),
            None => out.iter_mut().for_each(|v| *v = 0.0),
        }
    }

    #[inline]
    pub fn potential(&self, t: f64, x: &[f64]) -> f64 {
        self.potential.as_ref().map_or(0.0, |c| c(t, x))
    }

    #[inline]
    pub fn source(&self, t: f64, x: &[f64]) -> f64 {
        self.source.as_ref().map_or(0.0, |f| f(t, x))
    }

    #[inline]
    pub fn terminal(&self, x: &[f64]) -> f64 {
        (self.terminal)(x)
    }

    #[inline]
    pub fn exterior(&self, t: f64, x: &[f64]) -> f64 {
        (self.exterior)(t, x)
    }

    /// Switches orientation via t ↦ T − t:
    /// b̄(t,x) = −b(T−t,x), c̄ = −c(T−t,x), f̄ = −f(T−t,x), χ̄(t,x) = χ(T−t,x).
    /// Applying it twice gives back the original callbacks pointwise.
    pub fn reverse_time(&self) -> Self {
        let big_t = self.horizon;
        let drift = self.drift.clone().map(|b| -> DriftFn {
            Arc::new(move |t, x, out: &mut [f64]| {
                b(big_t - t, x, out);
                out.iter_mut().for_each(|v| *v = -*v);
            })
        });
        let potential = self
            .potential
            .clone()
            .map(|c| -> ScalarFn { Arc::new(move |t, x| -c(big_t - t, x)) });
        let source = self
            .source
            .clone()
            .map(|f| -> ScalarFn { Arc::new(move |t, x| -f(big_t - t, x)) });
        let chi = self.exterior.clone();
        Self {
            n: self.n,
            s: self.s,
            horizon: big_t,
            domain: self.domain.clone(),
            drift,
            potential,
            source,
            terminal: self.terminal.clone(),
            exterior: Arc::new(move |t, x| chi(big_t - t, x)),
            orientation: match self.orientation {
                Orientation::TerminalValue => Orientation::InitialValue,
                Orientation::InitialValue => Orientation::TerminalValue,
            },
        }
    }

    /// The terminal-value form of this problem, reversing time if needed.
    pub fn to_terminal(&self) -> Self {
        match self.orientation {
            Orientation::TerminalValue => self.clone(),
            Orientation::InitialValue => self.reverse_time(),
        }
    }
}

/// Free-function form of [`ProblemSpec::reverse_time`].
pub fn reverse_time(p: &ProblemSpec) -> ProblemSpec {
    p.reverse_time()
}

/// The steady-state problem −(−Δ)^s u + b·∇u + c u + f = 0 in D, u = g outside.
#[derive(Clone)]
pub struct SteadyProblemSpec {
    n: usize,
    s: f64,
    domain: Domain,
    drift: Option<SpatialDriftFn>,
    potential: Option<SpatialFn>,
    source: Option<SpatialFn>,
    exterior: SpatialFn,
}

impl fmt::Debug for SteadyProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SteadyProblemSpec")
            .field("n", &self.n)
            .field("s", &self.s)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl SteadyProblemSpec {
    pub fn new<G>(n: usize, s: f64, domain: Domain, exterior: G) -> Result<Self>
    where
        G: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        check_index(s)?;
        if domain.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: domain.dim(),
            });
        }
        Ok(Self {
            n,
            s,
            domain,
            drift: None,
            potential: None,
            source: None,
            exterior: Arc::new(exterior),
        })
    }

    pub fn with_drift<B>(mut self, b: B) -> Self
    where
        B: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        self.drift = Some(Arc::new(b));
        self
    }

    pub fn with_potential<C>(mut self, c: C) -> Self
    where
        C: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.potential = Some(Arc::new(c));
        self
    }

    pub fn with_source<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.source = Some(Arc::new(f));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn has_drift(&self) -> bool {
        self.drift.is_some()
    }

    #[inline]
    pub fn drift(&self, x: &[f64], out: &mut [f64]) {
        match &self.drift {
            Some(b) => b(x, out),
            None => out.iter_mut().for_each(|v| *v = 0.0),
        }
    }

    #[inline]
    pub fn potential(&self, x: &[f64]) -> f64 {
        self.potential.as_ref().map_or(0.0, |c| c(x))
    }

    #[inline]
    pub fn source(&self, x: &[f64]) -> f64 {
        self.source.as_ref().map_or(0.0, |f| f(x))
    }

    #[inline]
    pub fn exterior(&self, x: &[f64]) -> f64 {
        (self.exterior)(x)
    }
}

/// A problem with constant coefficients: b ≡ `drift`, c ≡ `potential`,
/// f ≡ `source`, g ≡ `terminal`, χ ≡ `exterior`. Zero coefficients are left
/// detached so the simulators can skip them.
#[allow(clippy::too_many_arguments)]
pub fn constant_problem(
    n: usize,
    s: f64,
    horizon: f64,
    domain: Domain,
    drift: &[f64],
    potential: f64,
    source: f64,
    terminal: f64,
    exterior: f64,
) -> Result<ProblemSpec> {
    if drift.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: drift.len(),
        });
    }
    let mut p = ProblemSpec::new(n, s, horizon, domain, move |_| terminal, move |_, _| exterior)?;
    if drift.iter().any(|&v| v != 0.0) {
        let b = drift.to_vec();
        p = p.with_drift(move |_, _, out| out.copy_from_slice(&b));
    }
    if potential != 0.0 {
        p = p.with_potential(move |_, _| potential);
    }
    if source != 0.0 {
        p = p.with_source(move |_, _| source);
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleId {
    Example1,
    Example2,
    /// Example 3 with index i ∈ {1, 2}.
    Example3 { i: u8 },
}

impl ExampleId {
    pub fn name(&self) -> String {
        match self {
            ExampleId::Example1 => "example1".into(),
            ExampleId::Example2 => "example2".into(),
            ExampleId::Example3 { i } => format!("example3i{i}"),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "example1" => Ok(ExampleId::Example1),
            "example2" => Ok(ExampleId::Example2),
            "example3i1" => Ok(ExampleId::Example3 { i: 1 }),
            "example3i2" => Ok(ExampleId::Example3 { i: 2 }),
            other => Err(Error::Config(format!(
                "unknown example '{other}' (expected example1, example2, example3i1, example3i2 or custom)"
            ))),
        }
    }
}

/// A worked example: a problem on the unit ball with T = 1 and a known
/// closed-form solution.
#[derive(Clone)]
pub struct ExampleCase {
    pub id: ExampleId,
    pub n: usize,
    pub s: f64,
    pub problem: ProblemSpec,
    exact: ScalarFn,
    regularity: f64,
}

impl fmt::Debug for ExampleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExampleCase")
            .field("id", &self.id)
            .field("n", &self.n)
            .field("s", &self.s)
            .field("regularity", &self.regularity)
            .finish()
    }
}

impl ExampleCase {
    /// u(t, x) in terminal-value orientation.
    pub fn exact(&self, t: f64, x: &[f64]) -> f64 {
        (self.exact)(t, x)
    }

    pub fn name(&self) -> String {
        self.id.name()
    }

    /// Spatial Hölder regularity β of the exact solution.
    pub fn regularity(&self) -> f64 {
        self.regularity
    }
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// (1 − |x|²)₊^p
fn bump(x: &[f64], p: f64) -> f64 {
    (1.0 - norm_sq(x)).max(0.0).powf(p)
}

fn check_example_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::out_of_range("n", n as f64, "at least 2 for the worked examples"));
    }
    Ok(())
}

/// 2^{2s} Γ(2+s) Γ(n/2+s) / Γ(n/2): the fractional Laplacian of
/// (1 − |x|²)₊^{1+s} is this constant times (1 − (1 + 2s/n)|x|²) in the ball.
fn bump_laplacian_constant(n: usize, s: f64) -> Result<f64> {
    let half_n = n as f64 / 2.0;
    Ok(4.0_f64.powf(s) * gamma_fn(2.0 + s)? * crate::specfun::gamma_ratio(half_n + s, half_n)?)
}

/// Fractional heat equation with b = c = 0, χ = 0 and u = t(1 − |x|²)₊^{1+s}.
pub fn build_example1(n: usize, s: f64) -> Result<ExampleCase> {
    check_example_dim(n)?;
    check_index(s)?;
    let big_t = 1.0;
    let k = bump_laplacian_constant(n, s)?;
    let nf = n as f64;
    let problem = ProblemSpec::new(
        n,
        s,
        big_t,
        Domain::unit_ball(n),
        move |x| big_t * bump(x, 1.0 + s),
        |_, _| 0.0,
    )?
    .with_source(move |t, x| {
        k * (1.0 - (1.0 + 2.0 * s / nf) * norm_sq(x)) * t - bump(x, 1.0 + s)
    });
    Ok(ExampleCase {
        id: ExampleId::Example1,
        n,
        s,
        problem,
        exact: Arc::new(move |t, x| t * bump(x, 1.0 + s)),
        regularity: 1.0 + s,
    })
}

/// Full problem with b_j = t sin x_j, c = eᵗ/(1 + e^{−|x|}), χ = t and
/// u = t(1 − |x|²)₊^{1+s} + t.
pub fn build_example2(n: usize, s: f64) -> Result<ExampleCase> {
    check_example_dim(n)?;
    check_index(s)?;
    let big_t = 1.0;
    let k = bump_laplacian_constant(n, s)?;
    let nf = n as f64;
    let potential = |t: f64, x: &[f64]| t.exp() / (1.0 + (-norm_sq(x).sqrt()).exp());
    let problem = ProblemSpec::new(
        n,
        s,
        big_t,
        Domain::unit_ball(n),
        move |x| big_t * bump(x, 1.0 + s) + big_t,
        |t, _| t,
    )?
    .with_drift(|t, x, out| {
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = t * xi.sin();
        }
    })
    .with_potential(potential)
    .with_source(move |t, x| {
        let r2 = norm_sq(x);
        let one_minus = (1.0 - r2).max(0.0);
        let drift_dot: f64 = x.iter().map(|&xi| t * xi.sin() * xi).sum();
        k * (1.0 - (1.0 + 2.0 * s / nf) * r2) * t
            + 2.0 * t * (1.0 + s) * one_minus.powf(s) * drift_dot
            - potential(t, x) * (t * one_minus.powf(1.0 + s) + t)
            - one_minus.powf(1.0 + s)
            - 1.0
    });
    Ok(ExampleCase {
        id: ExampleId::Example2,
        n,
        s,
        problem,
        exact: Arc::new(move |t, x| t * bump(x, 1.0 + s) + t),
        regularity: 1.0 + s,
    })
}

/// Fractional heat equation with u_i = t(1 − |x|²)₊^{1+i+s}, i ∈ {1, 2}.
///
/// The source is
/// f_i = −(1 − |x|²)^{1+i+s} − C(n,s) B(−s, i+s+2) π^{n/2}/Γ(n/2) ₂F₁(s+n/2, −i−1; n/2; |x|²) t.
/// With `printed_first_term` the first term uses the exponent 2 + s for both
/// i, which only matches u_i for i = 1.
pub fn build_example3(n: usize, s: f64, i: u8, printed_first_term: bool) -> Result<ExampleCase> {
    check_example_dim(n)?;
    check_index(s)?;
    if !(i == 1 || i == 2) {
        return Err(Error::out_of_range("i", f64::from(i), "1 or 2"));
    }
    let big_t = 1.0;
    let fi = f64::from(i);
    let half_n = n as f64 / 2.0;
    let coef = stable_constant(n, s)? * beta_fn(-s, fi + s + 2.0)? * PI.powf(half_n)
        / gamma_fn(half_n)?;
    let p = 1.0 + fi + s;
    let first_exp = if printed_first_term { 2.0 + s } else { p };
    let m = u32::from(i) + 1;
    // Fail early on a bad series rather than inside a callback.
    hyp2f1_terminating(s + half_n, m, half_n, 0.5)?;
    let problem = ProblemSpec::new(
        n,
        s,
        big_t,
        Domain::unit_ball(n),
        move |x| big_t * bump(x, p),
        |_, _| 0.0,
    )?
    .with_source(move |t, x| {
        let z = norm_sq(x).min(1.0);
        let series = hyp2f1_terminating(s + half_n, m, half_n, z).unwrap_or(f64::NAN);
        -bump(x, first_exp) - coef * series * t
    });
    Ok(ExampleCase {
        id: ExampleId::Example3 { i },
        n,
        s,
        problem,
        exact: Arc::new(move |t, x| t * bump(x, p)),
        regularity: p,
    })
}

/// Builds any of the worked examples by id.
pub fn build_example(id: ExampleId, n: usize, s: f64, printed_first_term: bool) -> Result<ExampleCase> {
    match id {
        ExampleId::Example1 => build_example1(n, s),
        ExampleId::Example2 => build_example2(n, s),
        ExampleId::Example3 { i } => build_example3(n, s, i, printed_first_term),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::derive_stream;

    fn point_with_norm_sq(n: usize, r2: f64) -> Vec<f64> {
        vec![(r2 / n as f64).sqrt(); n]
    }

    #[test]
    fn example1_values() {
        let ex = build_example1(2, 0.5).unwrap();
        let x = point_with_norm_sq(2, 0.5);
        assert!((ex.exact(0.5, &x) - 0.5 * 0.5_f64.powf(1.5)).abs() < 1e-15);
        assert!((ex.exact(0.5, &x) - 0.176_776_7).abs() < 1e-7);
        assert_eq!(ex.exact(0.3, &[1.0, 0.0]), 0.0);
        assert_eq!(ex.exact(0.3, &[2.0, 1.0]), 0.0);
        for n in [2, 3, 10] {
            for s in [0.25, 0.5, 0.75] {
                let ex = build_example1(n, s).unwrap();
                let h = n as f64 / 2.0;
                let k = 4.0_f64.powf(s) * gamma_fn(2.0 + s).unwrap() * gamma_fn(h + s).unwrap()
                    / gamma_fn(h).unwrap();
                let t = 0.7;
                let got = ex.problem.source(t, &vec![0.0; n]);
                assert!((got - (k * t - 1.0)).abs() < 1e-13 * k.max(1.0));
            }
        }
        assert!(!ex.problem.has_drift() && !ex.problem.has_potential());
    }

    #[test]
    fn example2_values() {
        let ex = build_example2(2, 0.5).unwrap();
        let x = point_with_norm_sq(2, 0.5);
        assert!((ex.exact(0.5, &x) - (0.5 * 0.5_f64.powf(1.5) + 0.5)).abs() < 1e-15);
        assert!((ex.exact(0.5, &x) - 0.676_776_7).abs() < 1e-7);
        assert_eq!(ex.problem.exterior(0.25, &[1.0, 1.0]), 0.25);
        let mut b = [1.0, 1.0];
        ex.problem.drift(0.4, &[0.0, 0.0], &mut b);
        assert_eq!(b, [0.0, 0.0]);
    }

    #[test]
    fn example3_values() {
        let ex = build_example3(2, 0.5, 1, false).unwrap();
        let x = point_with_norm_sq(2, 0.5);
        assert!((ex.exact(0.5, &x) - 0.5 * 0.5_f64.powf(2.5)).abs() < 1e-15);
        assert!((ex.exact(0.5, &x) - 0.088_388_3).abs() < 1e-7);
        for i in [1u8, 2] {
            for (n, s) in [(2, 0.5), (3, 0.25), (10, 0.75)] {
                let ex = build_example3(n, s, i, false).unwrap();
                let h = n as f64 / 2.0;
                let coef = stable_constant(n, s).unwrap()
                    * beta_fn(-s, f64::from(i) + s + 2.0).unwrap()
                    * PI.powf(h)
                    / gamma_fn(h).unwrap();
                let t = 0.3;
                let got = ex.problem.source(t, &vec![0.0; n]);
                assert!((got - (-1.0 - coef * t)).abs() < 1e-12 * coef.abs().max(1.0));
            }
        }
        assert!(build_example3(2, 0.5, 3, false).is_err());
    }

    #[test]
    fn example3_coefficient_is_laplacian_constant() {
        // −C B π^{n/2}/Γ(n/2) = 2^{2s} Γ(n/2+s) Γ(i+s+2) / (Γ(n/2) Γ(i+2)).
        for i in [1u8, 2] {
            for (n, s) in [(2, 0.25), (3, 0.5), (4, 0.75)] {
                let h = n as f64 / 2.0;
                let fi = f64::from(i);
                let coef = stable_constant(n, s).unwrap()
                    * beta_fn(-s, fi + s + 2.0).unwrap()
                    * PI.powf(h)
                    / gamma_fn(h).unwrap();
                let direct = 4.0_f64.powf(s)
                    * gamma_fn(h + s).unwrap()
                    * gamma_fn(fi + s + 2.0).unwrap()
                    / (gamma_fn(h).unwrap() * gamma_fn(fi + 2.0).unwrap());
                assert!(((-coef - direct) / direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn example3_printed_variant_differs_only_for_i2() {
        let x = [0.3, 0.2];
        let a = build_example3(2, 0.5, 1, false).unwrap();
        let b = build_example3(2, 0.5, 1, true).unwrap();
        assert_eq!(a.problem.source(0.4, &x), b.problem.source(0.4, &x));
        let a = build_example3(2, 0.5, 2, false).unwrap();
        let b = build_example3(2, 0.5, 2, true).unwrap();
        assert_ne!(a.problem.source(0.4, &x), b.problem.source(0.4, &x));
        // First term vanishes on the boundary.
        let c = build_example3(2, 0.5, 1, false).unwrap();
        let on = [1.0, 0.0];
        let coef = c.problem.source(0.0, &on);
        assert_eq!(coef, 0.0);
    }

    #[test]
    fn manufactured_consistency() {
        let cases = [
            build_example1(3, 0.25).unwrap(),
            build_example2(3, 0.5).unwrap(),
            build_example3(3, 0.75, 1, false).unwrap(),
            build_example3(3, 0.75, 2, false).unwrap(),
        ];
        let mut rng = derive_stream(11, 0);
        for ex in &cases {
            let n = ex.n;
            let big_t = ex.problem.horizon();
            for _ in 0..1000 {
                let mut x: Vec<f64> = (0..n).map(|_| 2.0 * rng.uniform_open0() - 1.0).collect();
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r >= 1.0 {
                    x.iter_mut().for_each(|v| *v *= 0.99 / r);
                }
                assert!((ex.exact(big_t, &x) - ex.problem.terminal(&x)).abs() <= 1e-12);
                let t = rng.uniform_open0() * big_t;
                let scale = 1.0 + 3.0 * rng.uniform_open0();
                let mut y: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
                let ry = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                y.iter_mut().for_each(|v| *v *= scale / ry);
                assert!((ex.exact(t, &y) - ex.problem.exterior(t, &y)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn continuity_at_boundary() {
        for s in [0.25, 0.5, 0.75] {
            for ex in [build_example1(2, s).unwrap(), build_example3(2, s, 1, false).unwrap()] {
                let x = [1.0 - 1e-8, 0.0];
                let v = ex.exact(1.0, &x);
                assert!(v >= 0.0 && v < 10f64.powf(-8.0 * (1.0 + s) * 0.9));
            }
        }
    }

    #[test]
    fn reverse_time_transform() {
        let ex = build_example2(2, 0.5).unwrap();
        let rev = ex.problem.reverse_time();
        assert_eq!(rev.orientation(), Orientation::InitialValue);
        let x = [0.3, -0.2];
        let mut b = [0.0; 2];
        rev.drift(0.3, &x, &mut b);
        for j in 0..2 {
            assert!((b[j] + 0.7 * x[j].sin()).abs() < 1e-15);
        }
        assert_eq!(rev.exterior(0.0, &x), ex.problem.exterior(1.0, &x));
        assert_eq!(rev.potential(0.2, &x), -ex.problem.potential(0.8, &x));
        assert_eq!(rev.source(0.2, &x), -ex.problem.source(0.8, &x));

        let back = rev.reverse_time();
        assert_eq!(back.orientation(), Orientation::TerminalValue);
        let mut rng = derive_stream(3, 3);
        for _ in 0..100 {
            let t = rng.uniform_open0();
            let x = [rng.standard_normal() * 0.5, rng.standard_normal() * 0.5];
            let (mut b1, mut b2) = ([0.0; 2], [0.0; 2]);
            back.drift(t, &x, &mut b1);
            ex.problem.drift(t, &x, &mut b2);
            assert_eq!(b1, b2);
            assert_eq!(back.potential(t, &x), ex.problem.potential(t, &x));
            assert_eq!(back.source(t, &x), ex.problem.source(t, &x));
            assert_eq!(back.exterior(t, &x), ex.problem.exterior(t, &x));
            assert_eq!(back.terminal(&x), ex.problem.terminal(&x));
        }
    }

    #[test]
    fn example_ids_round_trip() {
        for name in ["example1", "example2", "example3i1", "example3i2"] {
            assert_eq!(ExampleId::parse(name).unwrap().name(), name);
        }
        assert!(ExampleId::parse("example4").is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(ProblemSpec::new(3, 0.5, 1.0, Domain::unit_ball(2), |_| 0.0, |_, _| 0.0).is_err());
        assert!(ProblemSpec::new(2, 1.5, 1.0, Domain::unit_ball(2), |_| 0.0, |_, _| 0.0).is_err());
        assert!(ProblemSpec::new(2, 0.5, 0.0, Domain::unit_ball(2), |_| 0.0, |_, _| 0.0).is_err());
        assert!(build_example1(1, 0.5).is_err());
    }
}
