//! Sampling primitives for the symmetric 2s-stable process with jumps of
//! size at most ε removed.
//!
//! The Lévy measure is ν(dy) = C(n,s) |y|^{-n-2s} dy. Restricted to
//! {|y| > ε} it has finite mass λ_ε, so the truncated process is compound
//! Poisson: exponential waiting times with rate λ_ε and jumps drawn from
//! ν(dy)/λ_ε on {|y| > ε}. The compensator of the band ε < |y| < 1 is
//! ∫ y ν(dy) over a set symmetric under y ↦ −y, which vanishes, so no drift
//! correction accompanies the jumps.

use std::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{check_dimension, check_index, gamma_fn, gamma_ratio, stable_constant};

/// Derived sampling constants for a given (n, s, ε).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableNoiseParams {
    pub n: usize,
    pub s: f64,
    pub eps: f64,
    /// C(n, s).
    pub c_ns: f64,
    /// ν({|y| > ε}): expected number of retained jumps per unit time.
    pub lambda_eps: f64,
    /// Per-axis standard-deviation scale of the removed small jumps.
    pub sigma_bar: f64,
}

impl StableNoiseParams {
    pub fn new(n: usize, s: f64, eps: f64) -> Result<Self> {
        check_dimension(n)?;
        check_index(s)?;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::out_of_range("eps", eps, "strictly between 0 and 1"));
        }
        let half_n = n as f64 / 2.0;
        let c_ns = stable_constant(n, s)?;
        // λ_ε = 2^{2s} Γ(n/2 + s) ε^{-2s} / (Γ(1 − s) Γ(n/2))
        let lambda_eps =
            4.0_f64.powf(s) * gamma_ratio(half_n + s, half_n)? * eps.powf(-2.0 * s)
                / gamma_fn(1.0 - s)?;
        // σ̄² = C(n,s) ε^{2-2s}/(2-2s) · π^{n/2}/Γ(n/2 + 1), written through
        // C(n,s) π^{n/2} = s 2^{2s} Γ(n/2+s)/Γ(1-s) to stay finite for large n.
        let c_times_ball = s * 4.0_f64.powf(s) * gamma_ratio(half_n + s, half_n + 1.0)?
            / gamma_fn(1.0 - s)?;
        let sigma_sq = c_times_ball * eps.powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s);
        Ok(Self {
            n,
            s,
            eps,
            c_ns,
            lambda_eps,
            sigma_bar: sigma_sq.sqrt(),
        })
    }
}

/// Alias matching the operation name used throughout the docs.
pub fn make_params(n: usize, s: f64, eps: f64) -> Result<StableNoiseParams> {
    StableNoiseParams::new(n, s, eps)
}

/// A deterministic random stream identified by `(seed, index)`.
///
/// Backed by ChaCha8 with `index` selecting the cipher stream, so streams
/// with distinct indices are independent and the output is identical on
/// every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self { inner }
    }

    /// Uniform on (0, 1]; never returns zero.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.inner.random::<f64>()
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

pub fn derive_stream(seed: u64, index: u64) -> RngStream {
    RngStream::new(seed, index)
}

/// Exponential waiting time with rate λ_ε from a given uniform `u ∈ (0, 1]`.
#[inline]
pub fn jump_time_from_uniform(u: f64, lambda: f64) -> f64 {
    -u.ln() / lambda
}

/// Radius of a jump from a given uniform `u ∈ (0, 1]`: inverts
/// P(|J| > r) = (ε/r)^{2s}.
#[inline]
pub fn jump_radius_from_uniform(u: f64, eps: f64, s: f64) -> f64 {
    eps * u.powf(-0.5 / s)
}

pub fn sample_jump_time(rng: &mut RngStream, params: &StableNoiseParams) -> f64 {
    jump_time_from_uniform(rng.uniform_open0(), params.lambda_eps)
}

/// Fills `out` with a uniformly random unit vector.
pub fn sample_direction(rng: &mut RngStream, out: &mut [f64]) {
    loop {
        let mut norm_sq = 0.0;
        for v in out.iter_mut() {
            *v = rng.standard_normal();
            norm_sq += *v * *v;
        }
        if norm_sq > 0.0 {
            let inv = norm_sq.sqrt().recip();
            out.iter_mut().for_each(|v| *v *= inv);
            return;
        }
    }
}

/// Writes one jump of the truncated process into `out` (length n).
pub fn sample_jump_into(rng: &mut RngStream, params: &StableNoiseParams, out: &mut [f64]) {
    sample_direction(rng, out);
    let radius = jump_radius_from_uniform(rng.uniform_open0(), params.eps, params.s);
    out.iter_mut().for_each(|v| *v *= radius);
}

pub fn sample_jump(rng: &mut RngStream, params: &StableNoiseParams) -> Vec<f64> {
    let mut out = vec![0.0; params.n];
    sample_jump_into(rng, params, &mut out);
    out
}

/// Independent ±1 entries, 64 per drawn word.
pub fn sample_rademacher_into(rng: &mut RngStream, out: &mut [f64]) {
    for chunk in out.chunks_mut(64) {
        let bits = rng.next_u64();
        for (k, v) in chunk.iter_mut().enumerate() {
            *v = if (bits >> k) & 1 == 1 { 1.0 } else { -1.0 };
        }
    }
}

pub fn sample_rademacher(rng: &mut RngStream, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    sample_rademacher_into(rng, &mut out);
    out
}

/// Closed-form tail mass ν({|y| > r}) for r > 0, used to cross-check λ_ε.
pub fn tail_mass(n: usize, s: f64, r: f64) -> Result<f64> {
    let surface = crate::specfun::sphere_surface(n)?;
    Ok(stable_constant(n, s)? * surface * r.powf(-2.0 * s) / (2.0 * s))
}

/// Volume of the unit n-ball, π^{n/2}/Γ(n/2 + 1).
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    let half_n = n as f64 / 2.0;
    Ok(PI.powf(half_n) / gamma_fn(half_n + 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_two_dim_half() {
        let p = make_params(2, 0.5, 0.1).unwrap();
        assert!((p.lambda_eps - 10.0).abs() < 1e-12);
        assert!((p.sigma_bar - 0.05_f64.sqrt()).abs() < 1e-14);
        assert!((p.c_ns - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn params_eps_near_one() {
        for (n, s) in [(2, 0.25), (3, 0.5), (10, 0.75)] {
            let p = make_params(n, s, 1.0 - 1e-12).unwrap();
            let h = n as f64 / 2.0;
            let expect = 4.0_f64.powf(s) * gamma_fn(h + s).unwrap()
                / (gamma_fn(1.0 - s).unwrap() * gamma_fn(h).unwrap());
            assert!(((p.lambda_eps - expect) / expect).abs() < 1e-10);
        }
    }

    #[test]
    fn params_reject_bad_input() {
        assert!(make_params(2, 0.0, 0.1).is_err());
        assert!(make_params(2, 1.0, 0.1).is_err());
        assert!(make_params(2, 0.5, 0.0).is_err());
        assert!(make_params(2, 0.5, 1.0).is_err());
        assert!(make_params(0, 0.5, 0.5).is_err());
    }

    #[test]
    fn params_monotone_in_eps() {
        let mut prev: Option<StableNoiseParams> = None;
        for k in 1..20 {
            let p = make_params(3, 0.6, k as f64 / 20.0).unwrap();
            if let Some(q) = prev {
                assert!(p.lambda_eps < q.lambda_eps);
                assert!(p.sigma_bar > q.sigma_bar);
            }
            prev = Some(p);
        }
    }

    #[test]
    fn sigma_bar_matches_direct_formula() {
        for (n, s, eps) in [(2, 0.25, 0.1), (3, 0.75, 0.025), (10, 0.5, 0.3)] {
            let p = make_params(n, s, eps).unwrap();
            let direct = p.c_ns * eps.powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s)
                * unit_ball_volume(n).unwrap();
            assert!(((p.sigma_bar.powi(2) - direct) / direct).abs() < 1e-13);
        }
    }

    #[test]
    fn large_dimension_params_are_finite() {
        let p = make_params(400, 0.5, 0.1).unwrap();
        assert!(p.lambda_eps.is_finite() && p.sigma_bar.is_finite());
    }

    #[test]
    fn inverse_cdf_boundaries() {
        assert_eq!(jump_time_from_uniform(1.0, 10.0), 0.0);
        assert!((jump_time_from_uniform((-1.0_f64).exp(), 10.0) - 0.1).abs() < 1e-16);
        assert_eq!(jump_radius_from_uniform(1.0, 0.1, 0.3), 0.1);
    }

    #[test]
    fn stream_determinism() {
        let mut a = derive_stream(42, 0);
        let mut b = derive_stream(42, 0);
        let mut c = derive_stream(42, 1);
        let xa: Vec<u64> = (0..100).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..100).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..100).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn uniform_never_zero() {
        let mut r = derive_stream(1, 2);
        for _ in 0..100_000 {
            let u = r.uniform_open0();
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn rademacher_entries_are_signs() {
        let mut r = derive_stream(5, 5);
        let xi = sample_rademacher(&mut r, 130);
        assert_eq!(xi.len(), 130);
        assert!(xi.iter().all(|&v| v == 1.0 || v == -1.0));
    }

    #[test]
    fn jump_norm_at_least_eps() {
        let p = make_params(3, 0.75, 0.1).unwrap();
        let mut r = derive_stream(9, 0);
        for _ in 0..10_000 {
            let j = sample_jump(&mut r, &p);
            let norm = j.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(norm >= 0.1 * (1.0 - 1e-14));
        }
    }
}
