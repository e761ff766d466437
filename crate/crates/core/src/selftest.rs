//! Quick property checks of the numerical kernels, run by `fraclap selftest`.

use std::f64::consts::PI;

use crate::geometry::Domain;
use crate::levy::{derive_stream, make_params, sample_jump, sample_rademacher};
use crate::montecarlo::estimate;
use crate::problems::constant_problem;
use crate::quad::integrate;
use crate::schemes::SchemeConfig;
use crate::specfun::{gamma_fn, hyp2f1_terminating, sphere_surface, stable_constant};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, limit: f64) -> Check {
    Check {
        name,
        passed: worst <= limit,
        detail: format!("worst {worst:.3e} (limit {limit:.1e})"),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn gamma_recurrence() -> Check {
    let mut rng = derive_stream(1, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = -10.0 + 40.0 * rng.uniform_open0();
        if (x - x.round()).abs() < 1e-6 {
            continue;
        }
        let (Ok(g1), Ok(g0)) = (gamma_fn(x + 1.0), gamma_fn(x)) else {
            return check("gamma recurrence", f64::INFINITY, 1e-11);
        };
        worst = worst.max(rel(g1, x * g0));
    }
    check("gamma recurrence", worst, 1e-11)
}

fn gamma_reflection() -> Check {
    let mut rng = derive_stream(1, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = -5.0 + 10.0 * rng.uniform_open0();
        if (x - x.round()).abs() < 1e-3 {
            continue;
        }
        let (Ok(a), Ok(b)) = (gamma_fn(x), gamma_fn(1.0 - x)) else {
            return check("gamma reflection", f64::INFINITY, 1e-10);
        };
        worst = worst.max((a * b * (PI * x).sin() / PI - 1.0).abs());
    }
    check("gamma reflection", worst, 1e-10)
}

fn gauss_summation() -> Check {
    let mut worst: f64 = 0.0;
    for &(a, m, c) in &[(0.5, 3u32, 2.0), (1.25, 2, 1.0), (2.5, 4, 3.5), (1.5, 1, 1.0)] {
        let lhs = hyp2f1_terminating(a, m, c, 1.0).unwrap_or(f64::NAN);
        let mf = f64::from(m);
        let rhs = (|| -> crate::Result<f64> {
            Ok(gamma_fn(c)? * gamma_fn(c - a + mf)? / (gamma_fn(c - a)? * gamma_fn(c + mf)?))
        })()
        .unwrap_or(f64::NAN);
        let err = rel(lhs, rhs);
        worst = if err.is_nan() { f64::INFINITY } else { worst.max(err) };
    }
    check("hyp2f1 Gauss summation", worst, 1e-10)
}

fn lambda_and_sigma_quadrature() -> Check {
    let mut worst: f64 = 0.0;
    for n in [2usize, 3, 10] {
        for s in [0.25, 0.5, 0.75] {
            for eps in [0.1, 0.025] {
                let (Ok(p), Ok(c), Ok(area)) =
                    (make_params(n, s, eps), stable_constant(n, s), sphere_surface(n))
                else {
                    return check("levy constants vs quadrature", f64::INFINITY, 1e-10);
                };
                // Tail mass with r = ε e^w, second moment with r = ε u².
                let w_max = 50.0 / (2.0 * s);
                let tail = integrate(|w| (-2.0 * s * w).exp(), 0.0, w_max, 1e-15);
                let lambda_q = c * area * eps.powf(-2.0 * s) * tail;
                let inner = integrate(|u| 2.0 * u.powf(3.0 - 4.0 * s), 0.0, 1.0, 1e-15);
                let second_q = c * area * eps.powf(2.0 - 2.0 * s) * inner;
                worst = worst
                    .max(rel(p.lambda_eps, lambda_q))
                    .max(rel(n as f64 * p.sigma_bar * p.sigma_bar, second_q));
            }
        }
    }
    check("levy constants vs quadrature", worst, 1e-10)
}

fn radius_ks() -> Check {
    let (n, s, eps) = (3, 0.75, 0.1);
    let Ok(p) = make_params(n, s, eps) else {
        return check("jump radius KS", f64::INFINITY, 0.0);
    };
    let mut rng = derive_stream(2, 0);
    let count = 10_000;
    let mut radii: Vec<f64> = (0..count)
        .map(|_| sample_jump(&mut rng, &p).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    radii.sort_by(f64::total_cmp);
    let mut d: f64 = 0.0;
    for (k, &r) in radii.iter().enumerate() {
        let cdf = 1.0 - (eps / r).powf(2.0 * s);
        let lo = k as f64 / count as f64;
        let hi = (k + 1) as f64 / count as f64;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    check("jump radius KS", d, 1.358 / (count as f64).sqrt())
}

fn rademacher_balance() -> Check {
    let mut rng = derive_stream(3, 0);
    let draws = 100_000;
    let mut sum = 0.0;
    for _ in 0..draws {
        sum += sample_rademacher(&mut rng, 3)[0];
    }
    check("rademacher mean", (sum / draws as f64).abs(), 0.01)
}

fn exit_geometry() -> Check {
    let ball = Domain::unit_ball(2);
    let mut worst: f64 = 0.0;
    let cases: [(&[f64], &[f64], f64, f64); 2] = [
        (&[0.9, 0.0], &[1.0, 0.0], 1.0, 0.1),
        (&[0.5, 0.0], &[0.0, 1.0], 10.0, 0.75_f64.sqrt()),
    ];
    for (x0, v, dt, expect) in cases {
        let got = ball.first_exit_linear(x0, v, dt, 64).unwrap_or(f64::INFINITY);
        worst = worst.max((got - expect).abs());
    }
    let got = ball
        .first_exit_sqrt(&[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0], 4.0, 64)
        .unwrap_or(f64::INFINITY);
    worst = worst.max((got - 1.0).abs());
    let mut rng = derive_stream(4, 0);
    for _ in 0..1000 {
        let x0 = [0.5 * rng.standard_normal() * 0.5, 0.5 * rng.standard_normal() * 0.5];
        if !ball.is_inside(&x0) {
            continue;
        }
        let v = [rng.standard_normal(), rng.standard_normal()];
        let a = ball.first_exit_linear(&x0, &v, 2.0, 64);
        let b = ball.first_exit_sqrt(&x0, &v, &[0.0, 0.0], 2.0, 64);
        if a != b {
            worst = f64::INFINITY;
        }
    }
    check("exit geometry", worst, 1e-12)
}

fn zero_variance() -> Check {
    let mut worst: f64 = 0.0;
    for n in [2usize, 10] {
        let Ok(p) = constant_problem(n, 0.5, 1.0, Domain::unit_ball(n), &vec![0.0; n], 0.0, 0.0, 1.5, 1.5)
        else {
            return check("zero variance", f64::INFINITY, 0.0);
        };
        for cfg in [SchemeConfig::scheme1(0.1), SchemeConfig::scheme2(0.1)] {
            match estimate(&p, &cfg, 0.0, &vec![0.1 / n as f64; n], 200, 5, 1) {
                Ok(r) => worst = worst.max((r.mean - 1.5).abs()).max(r.stderr),
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    check("zero variance", worst, 0.0)
}

/// Runs every check and returns the results in a fixed order.
pub fn run_all() -> Vec<Check> {
    vec![
        gamma_recurrence(),
        gamma_reflection(),
        gauss_summation(),
        lambda_and_sigma_quadrature(),
        radius_ks(),
        rademacher_balance(),
        exit_geometry(),
        zero_variance(),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
