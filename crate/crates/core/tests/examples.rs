//! Runs every cargo example with small sample counts.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(solve_example1);
example!(convergence_study);
example!(scheme_comparison);
example!(steady_state);
example!(high_dimension);
example!(custom_problem);
example!(sampler_laws);
example!(single_paths);
example!(time_reversal);

#[test]
fn examples_run() {
    solve_example1::run_example(500).unwrap();
    convergence_study::run_example(500, 0.5).unwrap();
    scheme_comparison::run_example(500).unwrap();
    steady_state::run_example(500).unwrap();
    high_dimension::run_example(100).unwrap();
    custom_problem::run_example(500).unwrap();
    sampler_laws::run_example(2_000).unwrap();
    single_paths::run_example(2).unwrap();
    time_reversal::run_example(500).unwrap();
}
