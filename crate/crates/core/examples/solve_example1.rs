// Estimate u(0.5, x) for Example 1 on the unit disc with both schemes and
// compare with the closed form.
//
//     cargo run --release --example solve_example1 -- 100000

use fraclap::{build_example1, estimate, SchemeConfig};

pub fn run_example(n_samples: u64) -> fraclap::Result<()> {
    let ex = build_example1(2, 0.5)?;
    let (t0, x0) = (0.5, [0.5, 0.5]);
    let exact = ex.exact(t0, &x0);
    println!("exact u = {exact:.6}");
    for eps in [1.0 / 10.0, 1.0 / 40.0, 1.0 / 160.0] {
        for cfg in [SchemeConfig::scheme1(eps), SchemeConfig::scheme2(eps)] {
            let r = estimate(&ex.problem, &cfg, t0, &x0, n_samples, 42, 4)?;
            println!(
                "scheme {} eps 1/{:<3} mean {:.6} ± {:.1e}  error {:.2e}  steps {:.1}",
                cfg.scheme,
                (1.0 / eps).round(),
                r.mean,
                r.stderr,
                (r.mean - exact).abs(),
                r.avg_steps
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    run_example(n)
}
