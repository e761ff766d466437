// The truncated jump law: rate λ_ε, the small-jump scale σ̄_ε, and the
// empirical tail P(|J| > r) against (ε/r)^{2s}.
//
//     cargo run --release --example sampler_laws -- 1000000

use fraclap::levy::sample_jump;
use fraclap::{derive_stream, make_params};

pub fn run_example(draws: u64) -> fraclap::Result<()> {
    for s in [0.25, 0.5, 0.75] {
        let p = make_params(3, s, 0.1)?;
        println!(
            "n=3 s={s} eps=0.1: C = {:.5}, lambda = {:.4}, sigma_bar = {:.5}",
            p.c_ns, p.lambda_eps, p.sigma_bar
        );
        let mut rng = derive_stream(1, 0);
        let radii: Vec<f64> = (0..draws)
            .map(|_| sample_jump(&mut rng, &p).iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect();
        for r in [0.2, 0.5, 1.0, 2.0] {
            let empirical = radii.iter().filter(|&&x| x > r).count() as f64 / draws as f64;
            println!("  P(|J| > {r}) = {empirical:.4} (law {:.4})", (p.eps / r).powf(2.0 * s));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100_000);
    run_example(n)
}
