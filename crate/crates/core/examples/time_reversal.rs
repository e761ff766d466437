// Problems posed forward in time (data at t = 0) are handled by reversing
// time; `estimate` does this itself when given an initial-value problem.
//
//     cargo run --release --example time_reversal

use fraclap::{build_example1, estimate, SchemeConfig};

pub fn run_example(n_samples: u64) -> fraclap::Result<()> {
    let ex = build_example1(2, 0.5)?;
    let forward = ex.problem.reverse_time();
    let cfg = SchemeConfig::scheme1(1.0 / 40.0);
    let x0 = [0.3, 0.1];
    for t in [0.25, 0.5, 0.75] {
        // Forward time t is terminal-value time 1 − t.
        let r = estimate(&forward, &cfg, t, &x0, n_samples, 11, 4)?;
        println!(
            "forward t = {t}: {:.5} ± {:.1e} (exact {:.5})",
            r.mean,
            r.stderr,
            ex.exact(1.0 - t, &x0)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    run_example(n)
}
