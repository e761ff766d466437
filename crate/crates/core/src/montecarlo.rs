//! Parallel Monte Carlo estimation with reproducible per-path streams.
//!
//! Path `j` always draws from `derive_stream(seed, j)`. Payoffs are
//! collected in path order and reduced sequentially, so the result does not
//! depend on the number of worker threads.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::derive_stream;
use crate::problems::{Orientation, ProblemSpec, SteadyProblemSpec};
use crate::schemes::{PathModel, PathSimulator, SchemeConfig, Workspace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub avg_steps: f64,
    pub elapsed_seconds: f64,
    pub seed: u64,
    pub min: f64,
    pub max: f64,
}

/// Neumaier's compensated sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Mean, standard error (sample variance with N − 1), min and max.
pub fn summarize(payoffs: &[f64]) -> Result<Summary> {
    if payoffs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = payoffs.len() as f64;
    let mut acc = CompensatedSum::default();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in payoffs {
        acc.add(v);
        min = min.min(v);
        max = max.max(v);
    }
    let mean = if min == max { min } else { acc.value() / n };
    let stderr = if payoffs.len() < 2 || min == max {
        0.0
    } else {
        let mut sq = CompensatedSum::default();
        for &v in payoffs {
            let d = v - mean;
            sq.add(d * d);
        }
        (sq.value() / (n - 1.0) / n).sqrt()
    };
    Ok(Summary {
        mean,
        stderr,
        min,
        max,
    })
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::out_of_range("workers", 0.0, "at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} worker threads: {e}")))
}

/// Runs `n_samples` paths of a prepared simulator from (t0, x0).
pub fn estimate_with<M: PathModel>(
    sim: &PathSimulator<M>,
    t0: f64,
    x0: &[f64],
    n_samples: u64,
    seed: u64,
    workers: usize,
) -> Result<EstimatorReport> {
    if n_samples == 0 {
        return Err(Error::out_of_range("N", 0.0, "at least 1"));
    }
    sim.check_start(t0, x0)?;
    let pool = thread_pool(workers)?;
    let n = x0.len();

    let start = Instant::now();
    let results: Vec<Result<(f64, u64)>> = pool.install(|| {
        (0..n_samples)
            .into_par_iter()
            .map_init(
                || Workspace::new(n),
                |ws, j| {
                    let mut rng = derive_stream(seed, j);
                    sim.run_unchecked(t0, x0, &mut rng, ws)
                        .map(|o| (o.payoff, o.steps))
                        .map_err(|e| match e {
                            Error::MaxSteps {
                                max_steps, state, ..
                            } => Error::MaxSteps {
                                path: Some(j),
                                max_steps,
                                state,
                            },
                            other => other,
                        })
                },
            )
            .collect()
    });
    let mut payoffs = Vec::with_capacity(results.len());
    let mut total_steps: u64 = 0;
    for r in results {
        let (payoff, steps) = r?;
        payoffs.push(payoff);
        total_steps += steps;
    }
    let summary = summarize(&payoffs)?;
    let elapsed_seconds = start.elapsed().as_secs_f64();

    Ok(EstimatorReport {
        mean: summary.mean,
        stderr: summary.stderr,
        n_samples,
        avg_steps: total_steps as f64 / n_samples as f64,
        elapsed_seconds,
        seed,
        min: summary.min,
        max: summary.max,
    })
}

/// Estimates u(t0, x0). For a problem in initial-value orientation, t0 is
/// read in that orientation and mapped to T − t0 internally.
pub fn estimate(
    p: &ProblemSpec,
    cfg: &SchemeConfig,
    t0: f64,
    x0: &[f64],
    n_samples: u64,
    seed: u64,
    workers: usize,
) -> Result<EstimatorReport> {
    let (model, t_start) = match p.orientation() {
        Orientation::TerminalValue => (p.clone(), t0),
        Orientation::InitialValue => (p.reverse_time(), p.horizon() - t0),
    };
    let sim = PathSimulator::new(model, *cfg)?;
    estimate_with(&sim, t_start, x0, n_samples, seed, workers)
}

/// Estimates the steady-state solution at x0.
pub fn estimate_steady(
    p: &SteadyProblemSpec,
    cfg: &SchemeConfig,
    x0: &[f64],
    n_samples: u64,
    seed: u64,
    workers: usize,
) -> Result<EstimatorReport> {
    let sim = PathSimulator::new(p.clone(), *cfg)?;
    estimate_with(&sim, 0.0, x0, n_samples, seed, workers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::problems::{build_example1, constant_problem};

    #[test]
    fn summarize_small_cases() {
        let s = summarize(&[5.0]).unwrap();
        assert_eq!((s.mean, s.stderr, s.min, s.max), (5.0, 0.0, 5.0, 5.0));
        let s = summarize(&[1.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.min, s.max), (2.0, 1.0, 3.0));
        assert!((s.stderr - 1.0).abs() < 1e-15);
        assert!(matches!(summarize(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn summarize_constant_is_exact() {
        let v = vec![0.1; 1000];
        let s = summarize(&v).unwrap();
        assert_eq!(s.mean, 0.1);
        assert_eq!(s.stderr, 0.0);
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let mut acc = CompensatedSum::default();
        acc.add(1e16);
        for _ in 0..1000 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 1000.0);
    }

    #[test]
    fn constant_problem_zero_variance() {
        let p = constant_problem(3, 0.3, 1.0, Domain::unit_ball(3), &[0.0; 3], 0.0, 0.0, -2.5, -2.5)
            .unwrap();
        let r = estimate(&p, &SchemeConfig::scheme1(0.2), 0.0, &[0.1, 0.0, 0.0], 500, 1, 3).unwrap();
        assert_eq!(r.mean, -2.5);
        assert_eq!(r.stderr, 0.0);
        assert_eq!(r.n_samples, 500);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let ex = build_example1(2, 0.5).unwrap();
        let cfg = SchemeConfig::scheme1(0.1);
        let a = estimate(&ex.problem, &cfg, 0.5, &[0.5, 0.5], 2000, 42, 1).unwrap();
        let b = estimate(&ex.problem, &cfg, 0.5, &[0.5, 0.5], 2000, 42, 5).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        assert_eq!(a.avg_steps, b.avg_steps);
    }

    #[test]
    fn initial_orientation_maps_time() {
        let ex = build_example1(2, 0.5).unwrap();
        let cfg = SchemeConfig::scheme1(0.1);
        let rev = ex.problem.reverse_time();
        let a = estimate(&ex.problem, &cfg, 0.25, &[0.5, 0.5], 500, 3, 2).unwrap();
        let b = estimate(&rev, &cfg, 0.75, &[0.5, 0.5], 500, 3, 2).unwrap();
        assert_eq!(a.mean, b.mean);
    }

    #[test]
    fn max_steps_error_names_path() {
        let ex = build_example1(2, 0.75).unwrap();
        let cfg = SchemeConfig::scheme1(1.0 / 160.0).with_max_steps(2);
        match estimate(&ex.problem, &cfg, 0.0, &[0.0, 0.0], 50, 1, 2) {
            Err(Error::MaxSteps { path: Some(_), .. }) => {}
            other => panic!("expected MaxSteps, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let ex = build_example1(2, 0.5).unwrap();
        let cfg = SchemeConfig::scheme1(0.1);
        assert!(estimate(&ex.problem, &cfg, 0.5, &[0.5, 0.5], 0, 1, 1).is_err());
        assert!(estimate(&ex.problem, &cfg, 0.5, &[0.5, 0.5], 10, 1, 0).is_err());
        assert!(matches!(
            estimate(&ex.problem, &cfg, 0.5, &[0.9, 0.9], 10, 1, 1),
            Err(Error::StartOutsideDomain)
        ));
    }
}
