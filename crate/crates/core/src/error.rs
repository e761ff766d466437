use thiserror::Error;

use crate::schemes::PathState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the routine it was passed to.
    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("gamma function overflows at x = {0}")]
    Overflow(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("starting point lies outside the open domain")]
    StartOutsideDomain,

    /// A single path ran out of its step budget. `path` is filled in by the
    /// Monte Carlo driver.
    #[error("path {} exceeded max_steps = {max_steps} at t = {:.6}", path.map_or("?".to_string(), |p| p.to_string()), state.t)]
    MaxSteps {
        path: Option<u64>,
        max_steps: u64,
        state: Box<PathState>,
    },

    #[error("empty input")]
    EmptyInput,

    #[error("order fit is degenerate: {0}")]
    DegenerateFit(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed study table: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::OutOfRange {
            name,
            value,
            expected,
        }
    }

    /// True for errors caused by bad input rather than a failure during
    /// sampling or I/O.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::OutOfRange { .. }
                | Error::Pole(_)
                | Error::DimensionMismatch { .. }
                | Error::StartOutsideDomain
                | Error::Config(_)
                | Error::EmptyInput
        )
    }
}
