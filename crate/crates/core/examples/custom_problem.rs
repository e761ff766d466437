// A user-defined problem on the square (−1, 1)² with drift, a potential,
// a source and space-time exterior data. There is no closed form here, so
// the two schemes are compared with each other as ε shrinks.
//
//     cargo run --release --example custom_problem -- 50000

use fraclap::{estimate, Domain, ProblemSpec, SchemeConfig};

pub fn run_example(n_samples: u64) -> fraclap::Result<()> {
    let square = Domain::general(
        |x: &[f64]| x.iter().all(|v| v.abs() < 1.0),
        vec![0.0, 0.0],
        2f64.sqrt(),
    )?;
    let p = ProblemSpec::new(2, 0.6, 1.0, square, |x| x[0] * x[1], |t, x| t + x[0].cos())?
        .with_drift(|_, x, out| {
            out[0] = -x[1];
            out[1] = x[0];
        })
        .with_potential(|_, x| -0.5 * (x[0] * x[0] + x[1] * x[1]))
        .with_source(|t, _| t);
    let x0 = [0.2, -0.4];
    for eps in [0.1, 0.05, 0.025] {
        let one = estimate(&p, &SchemeConfig::scheme1(eps), 0.0, &x0, n_samples, 5, 4)?;
        let two = estimate(&p, &SchemeConfig::scheme2(eps), 0.0, &x0, n_samples, 5, 4)?;
        println!(
            "eps {eps:<6} scheme 1 {:.5} ± {:.1e}   scheme 2 {:.5} ± {:.1e}",
            one.mean, one.stderr, two.mean, two.stderr
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    run_example(n)
}
