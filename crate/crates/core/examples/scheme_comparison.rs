// Example 3 (i = 1) has a smoother solution, where replacing the small
// jumps by a matched Rademacher term pays off: compare both schemes at
// equal ε.
//
//     cargo run --release --example scheme_comparison -- 200000

use fraclap::{build_example3, estimate, SchemeConfig};

pub fn run_example(n_samples: u64) -> fraclap::Result<()> {
    let ex = build_example3(2, 0.5, 1, false)?;
    let (t0, x0) = (0.5, [0.5, 0.5]);
    let exact = ex.exact(t0, &x0);
    println!("{:>8} {:>12} {:>12} {:>8} {:>8}", "eps", "err s1", "err s2", "steps1", "steps2");
    for k in 2..=6 {
        let eps = 0.5_f64.powi(k);
        let one = estimate(&ex.problem, &SchemeConfig::scheme1(eps), t0, &x0, n_samples, 1, 4)?;
        let two = estimate(&ex.problem, &SchemeConfig::scheme2(eps), t0, &x0, n_samples, 1, 4)?;
        println!(
            "{:>8} {:>12.3e} {:>12.3e} {:>8.2} {:>8.2}",
            format!("1/{}", 1 << k),
            (one.mean - exact).abs(),
            (two.mean - exact).abs(),
            one.avg_steps,
            two.avg_steps
        );
    }
    println!("stderr at this N is about {:.1e}", {
        let r = estimate(&ex.problem, &SchemeConfig::scheme2(1.0 / 64.0), t0, &x0, n_samples, 2, 4)?;
        r.stderr
    });
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    run_example(n)
}
