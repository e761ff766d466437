// The cost per path grows only mildly with the dimension: Example 1 in
// n = 2, 10 and 100 at a fixed ε.
//
//     cargo run --release --example high_dimension -- 10000

use fraclap::{build_example1, estimate, SchemeConfig};

pub fn run_example(n_samples: u64) -> fraclap::Result<()> {
    let s = 0.25;
    for n in [2, 10, 100] {
        let ex = build_example1(n, s)?;
        let x0 = vec![1.0 / n as f64; n];
        let r = estimate(&ex.problem, &SchemeConfig::scheme1(0.2), 0.5, &x0, n_samples, 3, 4)?;
        println!(
            "n = {n:>3}: error {:.3e} ± {:.1e}, {:.2} steps/path, {:.3}s",
            (r.mean - ex.exact(0.5, &x0)).abs(),
            r.stderr,
            r.avg_steps,
            r.elapsed_seconds
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2_000);
    run_example(n)
}
