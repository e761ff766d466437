//! Domains and exact first-exit times along the deterministic motion between
//! jumps.
//!
//! Exit semantics: the domain is open, so a point on the boundary has
//! already exited. Every exit time returned here is nudged, if necessary, so
//! that the point it produces tests as outside.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default number of scan subintervals for curved exit searches.
pub const DEFAULT_SCAN_K: usize = 64;

const BISECTION_TOL: f64 = 1e-12;

pub type InsideFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum Domain {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// An arbitrary bounded region given by a membership predicate. Points
    /// outside the bounding ball are always outside the domain.
    General {
        inside: InsideFn,
        bound_center: Vec<f64>,
        bound_radius: f64,
    },
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Ball { center, radius } => f
                .debug_struct("Ball")
                .field("dim", &center.len())
                .field("radius", radius)
                .finish(),
            Domain::General {
                bound_center,
                bound_radius,
                ..
            } => f
                .debug_struct("General")
                .field("dim", &bound_center.len())
                .field("bound_radius", bound_radius)
                .finish_non_exhaustive(),
        }
    }
}

#[inline]
fn dist_sq(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum()
}

#[inline]
fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// x0 + δ·v, written into `out`.
#[inline]
pub fn line_point(x0: &[f64], v: &[f64], delta: f64, out: &mut [f64]) {
    for ((o, &a), &b) in out.iter_mut().zip(x0).zip(v) {
        *o = a + delta * b;
    }
}

/// x0 + δ·b + √δ·w, written into `out`.
#[inline]
pub fn curve_point(x0: &[f64], b: &[f64], w: &[f64], delta: f64, out: &mut [f64]) {
    let root = delta.sqrt();
    for (((o, &a), &bb), &ww) in out.iter_mut().zip(x0).zip(b).zip(w) {
        *o = a + delta * bb + root * ww;
    }
}

impl Domain {
    /// The unit ball in ℝⁿ centred at the origin.
    pub fn unit_ball(n: usize) -> Self {
        Domain::Ball {
            center: vec![0.0; n],
            radius: 1.0,
        }
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::out_of_range("radius", radius, "positive and finite"));
        }
        Ok(Domain::Ball { center, radius })
    }

    pub fn general<F>(inside: F, bound_center: Vec<f64>, bound_radius: f64) -> Result<Self>
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        if !(bound_radius > 0.0 && bound_radius.is_finite()) {
            return Err(Error::out_of_range(
                "bound_radius",
                bound_radius,
                "positive and finite",
            ));
        }
        Ok(Domain::General {
            inside: Arc::new(inside),
            bound_center,
            bound_radius,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Ball { center, .. } => center.len(),
            Domain::General { bound_center, .. } => bound_center.len(),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// True iff `x` lies in the open domain.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.is_inside(x))
    }

    #[inline]
    pub(crate) fn is_inside(&self, x: &[f64]) -> bool {
        match self {
            Domain::Ball { center, radius } => dist_sq(x, center) < radius * radius,
            Domain::General {
                inside,
                bound_center,
                bound_radius,
            } => dist_sq(x, bound_center) < bound_radius * bound_radius && inside(x),
        }
    }

    /// Largest sphere around the domain: the ball itself, or the bounding ball.
    fn enclosing(&self) -> (&[f64], f64) {
        match self {
            Domain::Ball { center, radius } => (center, *radius),
            Domain::General {
                bound_center,
                bound_radius,
                ..
            } => (bound_center, *bound_radius),
        }
    }

    /// First δ ∈ (0, dt_max] at which x0 + δ·v leaves the domain.
    pub fn first_exit_linear(
        &self,
        x0: &[f64],
        v: &[f64],
        dt_max: f64,
        scan_k: usize,
    ) -> Option<f64> {
        let mut scratch = vec![0.0; x0.len()];
        self.first_exit_linear_with(x0, v, dt_max, scan_k, &mut scratch)
    }

    pub(crate) fn first_exit_linear_with(
        &self,
        x0: &[f64],
        v: &[f64],
        dt_max: f64,
        scan_k: usize,
        scratch: &mut [f64],
    ) -> Option<f64> {
        let speed_sq: f64 = v.iter().map(|a| a * a).sum();
        if speed_sq == 0.0 || !(dt_max > 0.0) {
            return None;
        }
        match self {
            Domain::Ball { center, radius } => {
                let mut dv = 0.0;
                let mut dd = 0.0;
                for ((&a, &c), &b) in x0.iter().zip(center).zip(v) {
                    let d = a - c;
                    dv += d * b;
                    dd += d * d;
                }
                // Positive root of speed_sq δ² + 2 dv δ + (dd − r²) = 0,
                // picked in the cancellation-free form.
                let cq = dd - radius * radius;
                let half_b = dv;
                let disc = (half_b * half_b - speed_sq * cq).max(0.0);
                let root = if half_b >= 0.0 {
                    -cq / (half_b + disc.sqrt())
                } else {
                    (disc.sqrt() - half_b) / speed_sq
                };
                if !(root <= dt_max) {
                    return None;
                }
                Some(self.nudge_outside(root.max(0.0), scratch, |d, out| {
                    line_point(x0, v, d, out)
                }))
            }
            Domain::General { .. } => {
                self.scan_and_bisect(dt_max, scan_k, scratch, |d, out| line_point(x0, v, d, out))
            }
        }
    }

    /// First δ ∈ (0, dt_max] at which x0 + δ·b + √δ·w leaves the domain.
    ///
    /// The curve is scanned in u = √δ over `scan_k` equal subintervals of
    /// [0, √dt_max]; the first outside sample is then refined by bisection.
    /// An excursion that leaves and re-enters inside one subinterval is
    /// not detected.
    pub fn first_exit_sqrt(
        &self,
        x0: &[f64],
        b: &[f64],
        w: &[f64],
        dt_max: f64,
        scan_k: usize,
    ) -> Option<f64> {
        let mut scratch = vec![0.0; x0.len()];
        self.first_exit_sqrt_with(x0, b, w, dt_max, scan_k, &mut scratch)
    }

    pub(crate) fn first_exit_sqrt_with(
        &self,
        x0: &[f64],
        b: &[f64],
        w: &[f64],
        dt_max: f64,
        scan_k: usize,
        scratch: &mut [f64],
    ) -> Option<f64> {
        if !(dt_max > 0.0) {
            return None;
        }
        let w_norm = norm(w);
        if w_norm == 0.0 {
            return self.first_exit_linear_with(x0, b, dt_max, scan_k, scratch);
        }
        let (c, r) = self.enclosing();
        let b_norm = norm(b);
        let u_max = dt_max.sqrt();
        // The curve cannot travel further than this from x0.
        let reach = u_max * w_norm + dt_max * b_norm;
        if matches!(self, Domain::Ball { .. }) && dist_sq(x0, c).sqrt() + reach < r {
            return None;
        }
        self.scan_and_bisect_sqrt(u_max, scan_k, scratch, |d, out| {
            curve_point(x0, b, w, d, out)
        })
    }

    fn nudge_outside<P>(&self, start: f64, scratch: &mut [f64], point: P) -> f64
    where
        P: Fn(f64, &mut [f64]),
    {
        // Doubling steps from one ulp: the point may only move once δ·|v|
        // exceeds half an ulp of the coordinates.
        let mut delta = start;
        let mut step = (start * f64::EPSILON).max(f64::MIN_POSITIVE);
        for _ in 0..1100 {
            point(delta, scratch);
            if !self.is_inside(scratch) {
                break;
            }
            delta = start + step;
            step *= 2.0;
        }
        delta
    }

    fn scan_and_bisect<P>(
        &self,
        dt_max: f64,
        scan_k: usize,
        scratch: &mut [f64],
        point: P,
    ) -> Option<f64>
    where
        P: Fn(f64, &mut [f64]),
    {
        let k = scan_k.max(1);
        let mut lo = 0.0;
        for j in 1..=k {
            let hi = if j == k { dt_max } else { dt_max * j as f64 / k as f64 };
            point(hi, scratch);
            if !self.is_inside(scratch) {
                return Some(self.bisect(lo, hi, scratch, &point));
            }
            lo = hi;
        }
        None
    }

    fn scan_and_bisect_sqrt<P>(
        &self,
        u_max: f64,
        scan_k: usize,
        scratch: &mut [f64],
        point: P,
    ) -> Option<f64>
    where
        P: Fn(f64, &mut [f64]),
    {
        let k = scan_k.max(1);
        let mut lo = 0.0;
        for j in 1..=k {
            let hi = if j == k { u_max } else { u_max * j as f64 / k as f64 };
            point(hi * hi, scratch);
            if !self.is_inside(scratch) {
                // Bisect in u, evaluating the curve at δ = u².
                let (mut a, mut b) = (lo, hi);
                while b - a > BISECTION_TOL {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    point(mid * mid, scratch);
                    if self.is_inside(scratch) {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                // u² can round back inside; step forward until the curve point is outside.
                return Some(self.nudge_outside(b * b, scratch, &point));
            }
            lo = hi;
        }
        None
    }

    fn bisect<P>(&self, mut lo: f64, mut hi: f64, scratch: &mut [f64], point: &P) -> f64
    where
        P: Fn(f64, &mut [f64]),
    {
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            point(mid, scratch);
            if self.is_inside(scratch) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// Free-function form of [`Domain::contains`].
pub fn contains(dom: &Domain, x: &[f64]) -> Result<bool> {
    dom.contains(x)
}

/// Free-function form of [`Domain::first_exit_linear`] with the default scan resolution.
pub fn first_exit_linear(dom: &Domain, x0: &[f64], v: &[f64], dt_max: f64) -> Option<f64> {
    dom.first_exit_linear(x0, v, dt_max, DEFAULT_SCAN_K)
}

/// Free-function form of [`Domain::first_exit_sqrt`] with the default scan resolution.
pub fn first_exit_sqrt(
    dom: &Domain,
    x0: &[f64],
    b: &[f64],
    w: &[f64],
    dt_max: f64,
) -> Option<f64> {
    dom.first_exit_sqrt(x0, b, w, dt_max, DEFAULT_SCAN_K)
}
