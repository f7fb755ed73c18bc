//! Continuous argument tracking along a parametrised path.
//!
//! Used for argument-principle zero counts (rectangles around zeros of ζ′)
//! and for circle windings of the signed Dirichlet polynomials.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use thiserror::Error;

/// Function value at a path parameter, with the optional phase velocity
/// `d arg f / du` when the derivative is cheap to get.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSample {
    pub value: Complex64,
    pub rate: Option<f64>,
}

impl PhaseSample {
    pub fn plain(value: Complex64) -> Self {
        Self { value, rate: None }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PhaseOptions {
    /// Spacing of the initial uniform samples.
    pub initial_step: f64,
    /// Samples with `|f|` below this abort the walk.
    pub min_modulus: f64,
    /// Bisection stops with an error below this segment length.
    pub min_step: f64,
}

impl Default for PhaseOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            min_modulus: 1e-6,
            min_step: 1e-10,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError<E> {
    #[error("|f| = {modulus:e} at path parameter {at} is below the modulus floor")]
    TooClose { at: f64, modulus: f64 },
    #[error("argument increment unresolved near path parameter {at}")]
    Unresolved { at: f64 },
    #[error(transparent)]
    Eval(E),
}

/// Total change of `arg f(u)` for `u` running from `u0` to `u1`.
///
/// Segments are bisected until the chord increment is below π/2 and, when
/// phase velocities are available, agrees with their trapezoid estimate to
/// within π/4.
pub fn track_phase<E, F>(f: &F, u0: f64, u1: f64, opts: &PhaseOptions) -> Result<f64, PhaseError<E>>
where
    F: Fn(f64) -> Result<PhaseSample, E>,
{
    let sample = |u: f64| -> Result<PhaseSample, PhaseError<E>> {
        let s = f(u).map_err(PhaseError::Eval)?;
        let m = s.value.norm();
        if !(m >= opts.min_modulus) {
            return Err(PhaseError::TooClose { at: u, modulus: m });
        }
        Ok(s)
    };

    let span = u1 - u0;
    if span == 0.0 {
        return Ok(0.0);
    }
    let pieces = ((span.abs() / opts.initial_step).ceil() as usize).max(4);
    let mut total = 0.0;
    let mut left_u = u0;
    let mut left = sample(u0)?;
    for i in 1..=pieces {
        let right_u = if i == pieces {
            u1
        } else {
            u0 + span * i as f64 / pieces as f64
        };
        let right = sample(right_u)?;
        total += refine(&sample, left_u, left, right_u, right, opts)?;
        left_u = right_u;
        left = right;
    }
    Ok(total)
}

fn refine<E, S>(
    sample: &S,
    ua: f64,
    a: PhaseSample,
    ub: f64,
    b: PhaseSample,
    opts: &PhaseOptions,
) -> Result<f64, PhaseError<E>>
where
    S: Fn(f64) -> Result<PhaseSample, PhaseError<E>>,
{
    let mut total = 0.0;
    let mut stack = vec![(ua, a, ub, b)];
    while let Some((ua, a, ub, b)) = stack.pop() {
        let delta = (b.value / a.value).arg();
        let h = ub - ua;
        let consistent = match (a.rate, b.rate) {
            (Some(ra), Some(rb)) => (delta - 0.5 * h * (ra + rb)).abs() < FRAC_PI_4,
            _ => true,
        };
        if delta.abs() < FRAC_PI_2 && consistent {
            total += delta;
            continue;
        }
        if h.abs() < opts.min_step {
            return Err(PhaseError::Unresolved { at: ua });
        }
        let um = 0.5 * (ua + ub);
        let m = sample(um)?;
        // right half pushed first so the left half is summed first
        stack.push((um, m, ub, b));
        stack.push((ua, a, um, m));
    }
    Ok(total)
}

/// Integer winding from an accumulated argument, rejecting totals that sit
/// far from a multiple of 2π.
pub fn winding_from_phase(total: f64) -> Option<i64> {
    let w = total / (2.0 * PI);
    let r = w.round();
    ((w - r).abs() < 0.25).then_some(r as i64)
}
