// Individual paths: where and why they stop, and what a step cap does to
// the step count.
//
//     cargo run --release --example single_paths

use fraclap::{build_example2, derive_stream, simulate_path, SchemeConfig};

pub fn run_example(paths: u64) -> fraclap::Result<()> {
    let ex = build_example2(2, 0.5)?;
    for (label, cfg) in [
        ("scheme 1", SchemeConfig::scheme1(0.05)),
        ("scheme 2", SchemeConfig::scheme2(0.05)),
        ("scheme 2, dt cap 0.01", SchemeConfig::scheme2(0.05).with_dt_cap(Some(0.01))),
    ] {
        println!("{label}");
        for k in 0..paths {
            let mut rng = derive_stream(9, k);
            let out = simulate_path(&ex.problem, &cfg, 0.5, &[0.5, 0.5], &mut rng)?;
            println!(
                "  path {k}: {:?} at t = {:.4}, x = ({:.3}, {:.3}), {} steps, payoff {:.4}",
                out.stop_reason, out.stop_time, out.stop_x[0], out.stop_x[1], out.steps, out.payoff
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    run_example(n)
}
