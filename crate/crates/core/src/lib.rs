//! Monte Carlo solvers for Dirichlet problems with the fractional Laplacian.
//!
//! The solution of
//!
//! ```text
//! ∂u/∂t − (−Δ)^s u + b·∇u + c u + f = 0   in [0, T) × D
//! ```
//!
//! with terminal data g and exterior data χ is written as an expectation
//! over a symmetric 2s-stable Lévy process stopped on leaving D. The process
//! is approximated by dropping (scheme 1) or Gaussian-matching (scheme 2)
//! the jumps smaller than ε, and the expectation is estimated by averaging
//! independent paths.
//!
//! ```no_run
//! use fraclap::{build_example1, estimate, SchemeConfig};
//!
//! let ex = build_example1(2, 0.5)?;
//! let report = estimate(&ex.problem, &SchemeConfig::scheme1(1.0 / 40.0), 0.5, &[0.5, 0.5], 10_000, 42, 4)?;
//! println!("{} ± {} (exact {})", report.mean, report.stderr, ex.exact(0.5, &[0.5, 0.5]));
//! # Ok::<(), fraclap::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod levy;
pub mod montecarlo;
pub mod problems;
pub mod quad;
pub mod schemes;
pub mod selftest;
pub mod specfun;
pub mod studies;

pub use error::{Error, Result};
pub use geometry::Domain;
pub use levy::{derive_stream, make_params, RngStream, StableNoiseParams};
pub use montecarlo::{estimate, estimate_steady, summarize, EstimatorReport};
pub use problems::{
    build_example, build_example1, build_example2, build_example3, constant_problem,
    reverse_time, ExampleCase, ExampleId, Orientation, ProblemSpec, SteadyProblemSpec,
};
pub use schemes::{
    simulate_path, simulate_path_scheme1, simulate_path_scheme2, simulate_path_steady,
    PathOutcome, PathSimulator, PathState, Scheme, SchemeConfig, StopReason,
};
pub use studies::{fit_order, run_study, run_study_with, theory_order, StudySettings, StudyTable};
