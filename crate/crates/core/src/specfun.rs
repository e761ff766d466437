//! Real special functions: Gamma, Beta, the terminating Gauss hypergeometric
//! series, and the normalising constant of the fractional Laplacian.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which Γ(x) is finite in `f64`.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn lanczos_sum(xm1: f64) -> f64 {
    let mut acc = LANCZOS[0];
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (xm1 + k as f64);
    }
    acc
}

/// sin(πx) with exact argument reduction, so that values near the integers
/// keep their relative accuracy.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round(); // r in [-1, 1]
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Γ(x) for real `x`.
///
/// Uses the Lanczos approximation for `x >= 0.5` and the reflection
/// formula Γ(x) = π / (sin(πx) Γ(1 − x)) below that.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::out_of_range("x", x, "finite"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let reflected = 1.0 - x;
        if reflected >= GAMMA_MAX_ARG {
            // Γ(1 − x) overflows, so Γ(x) underflows to a signed zero.
            return Ok(0.0_f64.copysign(s));
        }
        return Ok(PI / (s * gamma_fn(reflected)?));
    }
    if x >= GAMMA_MAX_ARG {
        return Err(Error::Overflow(x));
    }
    if x == x.floor() && x <= 30.0 {
        // Exact factorial while the product stays representable.
        return Ok((2..x as u32).fold(1.0, |acc, k| acc * f64::from(k)));
    }
    let xm1 = x - 1.0;
    let w = xm1 + LANCZOS_G + 0.5;
    // Split the power so that w^(x-1/2) does not overflow before exp(-w) scales it down.
    let half = w.powf(0.5 * (xm1 + 0.5));
    let value = (2.0 * PI).sqrt() * half * ((-w).exp() * half) * lanczos_sum(xm1);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(x))
    }
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::out_of_range("x", x, "positive and finite"));
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps us in the Lanczos range.
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let xm1 = x - 1.0;
    let w = xm1 + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (xm1 + 0.5) * w.ln() - w + lanczos_sum(xm1).ln())
}

/// Γ(a) / Γ(b) for positive arguments, falling back to logarithms when
/// either factor would overflow.
pub(crate) fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if a < GAMMA_MAX_ARG - 1.0 && b < GAMMA_MAX_ARG - 1.0 {
        Ok(gamma_fn(a)? / gamma_fn(b)?)
    } else {
        Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
    }
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a + b). Negative non-integer arguments are allowed.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    for v in [a, b, a + b] {
        if is_nonpositive_integer(v) {
            return Err(Error::Pole(v));
        }
    }
    Ok(gamma_fn(a)? * (gamma_fn(b)? / gamma_fn(a + b)?))
}

/// ₂F₁(a, −m; c; z) for a non-negative integer `m`, where the series is a
/// polynomial of degree `m` in `z`.
pub fn hyp2f1_terminating(a: f64, m: u32, c: f64, z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::out_of_range("z", z, "within [0, 1]"));
    }
    let mf = f64::from(m);
    for k in 0..m {
        if c + f64::from(k) == 0.0 {
            return Err(Error::out_of_range(
                "c",
                c,
                "not a non-positive integer reached by the series",
            ));
        }
    }
    // Nested Horner form: 1 + r0 z (1 + r1 z (1 + ...)).
    let mut acc = 1.0;
    for k in (0..m).rev() {
        let kf = f64::from(k);
        let ratio = (a + kf) * (kf - mf) / ((c + kf) * (kf + 1.0));
        acc = 1.0 + ratio * z * acc;
    }
    Ok(acc)
}

pub(crate) fn check_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::out_of_range("n", 0.0, "a positive dimension"));
    }
    Ok(())
}

pub(crate) fn check_index(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::out_of_range("s", s, "strictly between 0 and 1"));
    }
    Ok(())
}

/// C(n, s) = s 2^{2s} Γ(n/2 + s) / (π^{n/2} Γ(1 − s)), the constant in the
/// singular-integral definition of (−Δ)^s and the Lévy density of the
/// symmetric 2s-stable process.
pub fn stable_constant(n: usize, s: f64) -> Result<f64> {
    check_dimension(n)?;
    check_index(s)?;
    let half_n = n as f64 / 2.0;
    let ratio = if half_n + s < GAMMA_MAX_ARG - 1.0 {
        gamma_fn(half_n + s)? / PI.powf(half_n)
    } else {
        (ln_gamma(half_n + s)? - half_n * PI.ln()).exp()
    };
    Ok(s * 4.0_f64.powf(s) * ratio / gamma_fn(1.0 - s)?)
}

/// Surface measure of the unit sphere S^{n−1} ⊂ ℝⁿ: 2π^{n/2}/Γ(n/2).
pub fn sphere_surface(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let half_n = n as f64 / 2.0;
    if half_n < GAMMA_MAX_ARG - 1.0 {
        Ok(2.0 * PI.powf(half_n) / gamma_fn(half_n)?)
    } else {
        Ok(2.0 * (half_n * PI.ln() - ln_gamma(half_n)?).exp())
    }
}
