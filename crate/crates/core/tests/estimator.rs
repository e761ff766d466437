mod common;

use fraclap::problems::build_example2;
use fraclap::schemes::simulate_path;
use fraclap::{
    build_example1, build_example3, constant_problem, derive_stream, estimate, estimate_steady,
    fit_order, make_params, Domain, Orientation, ProblemSpec, SchemeConfig, SteadyProblemSpec,
};

#[test]
fn step_count_without_exit_is_poisson_plus_final_draw() {
    // A ball of radius 1e6 is never left at these jump sizes, so every
    // path runs to the horizon. The number of jump times inside [t0, T] is
    // Poisson(λ(T − t0)); the final draw that overshoots T is also counted.
    let (n, s, eps) = (2, 0.5, 0.05);
    let domain = Domain::ball(vec![0.0; n], 1e6).unwrap();
    let p = constant_problem(n, s, 1.0, domain, &[0.0; 2], 0.0, 0.0, 1.0, 1.0).unwrap();
    let lambda = make_params(n, s, eps).unwrap().lambda_eps;
    let cfg = SchemeConfig::scheme1(eps);
    let paths = 20_000;
    let t0 = 0.25;
    let mut counts = Vec::with_capacity(paths);
    for k in 0..paths {
        let mut rng = derive_stream(3, k as u64);
        let out = simulate_path(&p, &cfg, t0, &[0.0, 0.0], &mut rng).unwrap();
        counts.push(out.steps as f64);
    }
    let mean = counts.iter().sum::<f64>() / paths as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (paths - 1) as f64;
    let expect = lambda * (1.0 - t0);
    let stderr = (var / paths as f64).sqrt();
    assert!((mean - (expect + 1.0)).abs() < 3.0 * stderr, "mean {mean}, λ(T−t0) = {expect}");
    assert!((var / expect - 1.0).abs() < 0.05, "variance {var} vs {expect}");
}

#[test]
fn stderr_scales_like_inverse_root_n() {
    let ex = build_example1(2, 0.5).unwrap();
    let cfg = SchemeConfig::scheme1(0.05);
    let x0 = common::center_over_n(2);
    let small = estimate(&ex.problem, &cfg, 0.5, &x0, 10_000, 8, 2).unwrap();
    let large = estimate(&ex.problem, &cfg, 0.5, &x0, 20_000, 8, 2).unwrap();
    let ratio = small.stderr / large.stderr;
    assert!((1.2..=1.7).contains(&ratio), "ratio {ratio}");
}

#[test]
fn small_and_large_runs_agree() {
    let ex = build_example2(2, 0.5).unwrap();
    let cfg = SchemeConfig::scheme2(1.0 / 16.0);
    let x0 = common::center_over_n(2);
    let a = estimate(&ex.problem, &cfg, 0.5, &x0, 1_000, 21, 2).unwrap();
    let b = estimate(&ex.problem, &cfg, 0.5, &x0, 100_000, 22, 2).unwrap();
    let combined = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    assert!((a.mean - b.mean).abs() < 4.0 * combined);
}

#[test]
fn estimates_track_exact_solutions() {
    let x0 = common::center_over_n(2);
    let cases = [
        (build_example1(2, 0.5).unwrap(), SchemeConfig::scheme1(1.0 / 80.0)),
        (build_example2(2, 0.5).unwrap(), SchemeConfig::scheme1(1.0 / 80.0)),
        (build_example3(2, 0.5, 1, false).unwrap(), SchemeConfig::scheme2(1.0 / 32.0)),
        (build_example3(2, 0.5, 2, false).unwrap(), SchemeConfig::scheme2(1.0 / 32.0)),
    ];
    for (ex, cfg) in cases {
        let r = estimate(&ex.problem, &cfg, 0.5, &x0, 40_000, 5, 2).unwrap();
        let err = (r.mean - ex.exact(0.5, &x0)).abs();
        // Truncation bias at these ε is a few 1e-3.
        assert!(err < 4.0 * r.stderr + 6e-3, "{}: error {err}, stderr {}", ex.name(), r.stderr);
    }
}

#[test]
fn higher_dimension_estimate() {
    let n = 10;
    let ex = build_example1(n, 0.5).unwrap();
    let x0 = common::center_over_n(n);
    let r = estimate(&ex.problem, &SchemeConfig::scheme1(1.0 / 20.0), 0.5, &x0, 10_000, 4, 2)
        .unwrap();
    let err = (r.mean - ex.exact(0.5, &x0)).abs();
    assert!(err < 4.0 * r.stderr + 3e-2, "error {err}");
}

#[test]
fn initial_value_orientation_matches_terminal_form() {
    let ex = build_example1(2, 0.25).unwrap();
    let initial: ProblemSpec = ex.problem.reverse_time();
    assert_eq!(initial.orientation(), Orientation::InitialValue);
    let cfg = SchemeConfig::scheme1(0.1);
    let x0 = [0.3, -0.2];
    let a = estimate(&ex.problem, &cfg, 0.25, &x0, 2_000, 6, 1).unwrap();
    let b = estimate(&initial, &cfg, 0.75, &x0, 2_000, 6, 1).unwrap();
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
}

#[test]
fn mean_exit_time_decreases_away_from_center() {
    // E[τ_x] = Γ(n/2) (1 − |x|²)^s / (4^s Γ(1 + s) Γ(n/2 + s)) for the ball.
    let (n, s) = (2, 0.5);
    let p = SteadyProblemSpec::new(n, s, Domain::unit_ball(n), |_| 0.0)
        .unwrap()
        .with_source(|_| 1.0);
    let cfg = SchemeConfig::scheme2(1.0 / 40.0);
    let scale = common::gamma(1.0) / (2.0 * common::gamma(1.5) * common::gamma(1.5));
    let mut last = f64::INFINITY;
    for r in [0.0, 0.5, 0.9] {
        let est = estimate_steady(&p, &cfg, &[r, 0.0], 20_000, 30, 2).unwrap();
        let exact = scale * (1.0 - r * r).powf(s);
        assert!(est.mean < last);
        assert!((est.mean - exact).abs() < 4.0 * est.stderr + 0.03, "r={r}: {} vs {exact}", est.mean);
        last = est.mean;
    }
}

#[test]
fn printed_table_column_slope() {
    // Reference errors for Example 1, n = 2, s = 0.25, scheme 1.
    let rows = [
        (1.0 / 10.0, 3.525e-2),
        (1.0 / 20.0, 2.914e-2),
        (1.0 / 40.0, 2.151e-2),
        (1.0 / 80.0, 1.560e-2),
        (1.0 / 160.0, 1.131e-2),
    ];
    let slope = fit_order(&rows).unwrap();
    assert!((slope - 0.41).abs() < 0.01, "slope {slope}");
}
