// Mean exit time of the 2s-stable process from the unit ball, solved as a
// steady problem with f ≡ 1 and zero exterior data. The exact value is
// Γ(n/2)(1 − |x|²)^s / (4^s Γ(1 + s) Γ(n/2 + s)).
//
//     cargo run --release --example steady_state -- 50000

use fraclap::specfun::gamma_fn;
use fraclap::{estimate_steady, Domain, SchemeConfig, SteadyProblemSpec};

pub fn run_example(n_samples: u64) -> fraclap::Result<()> {
    let (n, s) = (3, 0.5);
    let p = SteadyProblemSpec::new(n, s, Domain::unit_ball(n), |_| 0.0)?.with_source(|_| 1.0);
    let h = n as f64 / 2.0;
    let scale = gamma_fn(h)? / (4f64.powf(s) * gamma_fn(1.0 + s)? * gamma_fn(h + s)?);
    let cfg = SchemeConfig::scheme2(1.0 / 40.0);
    for r in [0.0, 0.3, 0.6, 0.9] {
        let est = estimate_steady(&p, &cfg, &[r, 0.0, 0.0], n_samples, 7, 4)?;
        let exact = scale * (1.0 - r * r).powf(s);
        println!("|x| = {r:.1}: E[tau] ≈ {:.4} ± {:.4} (exact {exact:.4})", est.mean, est.stderr);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    run_example(n)
}
