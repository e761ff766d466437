//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

/// ln Γ(x) for x > 0: shift up to x ≥ 15, then the Stirling series.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 0.0;
    let mut z = x;
    while z < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z2 * z2 * z)
        - 1.0 / (1680.0 * z2 * z2 * z2 * z)
        + 1.0 / (1188.0 * z2 * z2 * z2 * z2 * z);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// C(n, s) = s 4^s Γ(n/2 + s) / (π^{n/2} Γ(1 − s)).
pub fn stable_constant(n: usize, s: f64) -> f64 {
    let h = n as f64 / 2.0;
    s * 4f64.powf(s) * (ln_gamma(h + s) - ln_gamma(1.0 - s) - h * PI.ln()).exp()
}

pub fn sphere_surface(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

/// Composite Simpson rule with `m` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let m = m + m % 2;
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for k in 1..m {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// ν({|y| > ε}) by quadrature of C r^{-1-2s} over (ε, ∞), with r = ε e^w.
pub fn tail_mass_quadrature(n: usize, s: f64, eps: f64) -> f64 {
    let w_max = 40.0 / s;
    let radial = simpson(|w| eps.powf(-2.0 * s) * (-2.0 * s * w).exp(), 0.0, w_max, 400_000);
    stable_constant(n, s) * sphere_surface(n) * radial
}

/// ∫_{|y|<ε} |y|² ν(dy) by quadrature of C r^{1-2s} over (0, ε), with r = ε u².
pub fn second_moment_quadrature(n: usize, s: f64, eps: f64) -> f64 {
    let radial = simpson(
        |u| 2.0 * eps.powf(2.0 - 2.0 * s) * u.powf(3.0 - 4.0 * s),
        0.0,
        1.0,
        20_000,
    );
    stable_constant(n, s) * sphere_surface(n) * radial
}

/// Kolmogorov–Smirnov distance of `sample` from a continuous CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(mut sample: Vec<f64>, cdf: F) -> f64 {
    sample.sort_by(f64::total_cmp);
    let m = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &v) in sample.iter().enumerate() {
        let c = cdf(v);
        d = d.max((c - k as f64 / m).abs()).max(((k + 1) as f64 / m - c).abs());
    }
    d
}

/// Asymptotic 95% critical value of the one-sample KS statistic.
pub fn ks_critical_95(m: usize) -> f64 {
    1.358 / (m as f64).sqrt()
}

pub fn center_over_n(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}
