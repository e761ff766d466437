// Weak error against ε for scheme 1 on Example 1, with the fitted order
// next to the predicted one. The table is written as CSV to stdout.
//
//     cargo run --release --example convergence_study -- 100000 0.25

use fraclap::studies::to_csv;
use fraclap::{build_example1, run_study_with, SchemeConfig, StudySettings};

pub fn run_example(n_samples: u64, s: f64) -> fraclap::Result<()> {
    let ex = build_example1(2, s)?;
    let eps = vec![1.0 / 10.0, 1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0];
    let settings = StudySettings::new(eps, 0.5, vec![0.5, 0.5], n_samples, 42);
    let table = run_study_with(&ex, &SchemeConfig::scheme1(0.1), &settings)?;
    print!("{}", to_csv(&table)?);
    match table.fitted_order {
        Some(p) => println!("fitted order {p:.3}, predicted {:.3}", table.theory_order),
        None => println!("order not available"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fraclap::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let s = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.5);
    run_example(n, s)
}
