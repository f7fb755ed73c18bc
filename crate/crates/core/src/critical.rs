//! Zeros of ζ′ in a rectangle: argument-principle counts on the boundary,
//! recursive subdivision, then Newton on ζ′/ζ″.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::winding::{track_phase, winding_from_phase, PhaseError, PhaseOptions, PhaseSample};
use crate::zeta::{zeta_jet, EvalConfig, StripPoint, ZetaError};

/// ζ′ has a double pole at 1 and no zeros with `0 <= t < 1` for `σ >= -2`,
/// so counting rectangles start at this height.
pub const POLE_CLEARANCE: f64 = 1.0;

const MIN_MODULUS: f64 = 1e-6;
const PERTURB_STEP: f64 = 1e-4;
const PERTURB_TRIES: usize = 5;
const NEWTON_ITERS: usize = 50;
const RESIDUAL_MAX: f64 = 1e-8;
const DEDUP_DIST: f64 = 1e-6;
const MIN_CELL: f64 = 1e-7;
const SLAB_HEIGHT: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriticalError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("|zeta'| = {modulus:e} at {at} on the rectangle boundary")]
    BoundaryTooClose { at: Complex64, modulus: f64 },
    #[error("argument increment unresolved on the boundary near {0}")]
    Unresolved(Complex64),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRectangle {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl SearchRectangle {
    pub fn new(sigma_lo: f64, sigma_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self, CriticalError> {
        let finite = [sigma_lo, sigma_hi, t_lo, t_hi].iter().all(|v| v.is_finite());
        if !finite || !(sigma_lo < sigma_hi) || !(t_lo < t_hi) {
            return Err(CriticalError::InvalidArgument(format!(
                "degenerate rectangle sigma {sigma_lo}..{sigma_hi}, t {t_lo}..{t_hi}"
            )));
        }
        Ok(Self {
            sigma_lo,
            sigma_hi,
            t_lo,
            t_hi,
        })
    }

    pub fn width(&self) -> f64 {
        self.sigma_hi - self.sigma_lo
    }

    pub fn height(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.sigma_lo + self.sigma_hi),
            0.5 * (self.t_lo + self.t_hi),
        )
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.sigma_lo && z.re < self.sigma_hi && z.im > self.t_lo && z.im < self.t_hi
    }

    fn grown(&self, d: f64) -> Self {
        Self {
            sigma_lo: self.sigma_lo - d,
            sigma_hi: self.sigma_hi + d,
            t_lo: self.t_lo - d,
            t_hi: self.t_hi + d,
        }
    }

    /// Two halves across the longer side.
    fn split(&self) -> [Self; 2] {
        let mut a = *self;
        let mut b = *self;
        if self.width() >= self.height() {
            let m = 0.5 * (self.sigma_lo + self.sigma_hi);
            a.sigma_hi = m;
            b.sigma_lo = m;
        } else {
            let m = 0.5 * (self.t_lo + self.t_hi);
            a.t_hi = m;
            b.t_lo = m;
        }
        [a, b]
    }

    /// Four quarters.
    pub fn quarters(&self) -> [Self; 4] {
        let sm = 0.5 * (self.sigma_lo + self.sigma_hi);
        let tm = 0.5 * (self.t_lo + self.t_hi);
        [
            Self { sigma_hi: sm, t_hi: tm, ..*self },
            Self { sigma_lo: sm, t_hi: tm, ..*self },
            Self { sigma_hi: sm, t_lo: tm, ..*self },
            Self { sigma_lo: sm, t_lo: tm, ..*self },
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub beta: f64,
    pub gamma: f64,
    pub zeta_value: Complex64,
    pub log_abs_zeta: f64,
    pub residual: f64,
}

impl CriticalPoint {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.beta, self.gamma)
    }
}

/// A cell the search could not settle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnresolvedCell {
    pub rect: SearchRectangle,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub points: Vec<CriticalPoint>,
    pub unresolved: Vec<UnresolvedCell>,
}

fn boundary_phase(rect: &SearchRectangle, cfg: &EvalConfig) -> Result<f64, CriticalError> {
    let corners = [
        Complex64::new(rect.sigma_lo, rect.t_lo),
        Complex64::new(rect.sigma_hi, rect.t_lo),
        Complex64::new(rect.sigma_hi, rect.t_hi),
        Complex64::new(rect.sigma_lo, rect.t_hi),
    ];
    let opts = PhaseOptions {
        min_modulus: MIN_MODULUS,
        ..PhaseOptions::default()
    };
    let mut total = 0.0;
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        let len = (b - a).norm();
        let dir = (b - a) / len;
        let point = |u: f64| if u >= len { b } else { a + dir * u };
        let f = |u: f64| -> Result<PhaseSample, ZetaError> {
            let j = zeta_jet(StripPoint::from(point(u)), cfg)?;
            Ok(PhaseSample {
                value: j.d1,
                rate: Some((j.d2 / j.d1 * dir).im),
            })
        };
        total += track_phase(&f, 0.0, len, &opts).map_err(|e| match e {
            PhaseError::TooClose { at, modulus } => CriticalError::BoundaryTooClose {
                at: point(at),
                modulus,
            },
            PhaseError::Unresolved { at } => CriticalError::Unresolved(point(at)),
            PhaseError::Eval(z) => CriticalError::Zeta(z),
        })?;
    }
    Ok(total)
}

fn count_unclamped(rect: &SearchRectangle, cfg: &EvalConfig) -> Result<u64, CriticalError> {
    let total = boundary_phase(rect, cfg)?;
    match winding_from_phase(total) {
        Some(n) if n >= 0 => Ok(n as u64),
        _ => Err(CriticalError::Unresolved(rect.center())),
    }
}

fn clamp_to_pole(rect: &SearchRectangle) -> Option<SearchRectangle> {
    if rect.t_hi <= POLE_CLEARANCE {
        return None;
    }
    Some(SearchRectangle {
        t_lo: rect.t_lo.max(POLE_CLEARANCE),
        ..*rect
    })
}

/// Number of zeros of ζ′ inside `rect`, by the argument principle.
///
/// The part of the rectangle below `t = 1` is dropped: it holds no zeros of
/// ζ′ for `σ >= -2` and would otherwise put the pole at 1 inside the contour.
pub fn count_zeros(rect: &SearchRectangle, cfg: &EvalConfig) -> Result<u64, CriticalError> {
    match clamp_to_pole(rect) {
        None => Ok(0),
        Some(r) => count_unclamped(&r, cfg),
    }
}

/// Count, growing the cell by 1e-4 per side on boundary trouble.
fn count_with_retry(rect: &SearchRectangle, cfg: &EvalConfig) -> Result<(SearchRectangle, u64), CriticalError> {
    let mut cell = *rect;
    let mut last = None;
    for _ in 0..=PERTURB_TRIES {
        match count_unclamped(&cell, cfg) {
            Ok(n) => return Ok((cell, n)),
            Err(e @ (CriticalError::BoundaryTooClose { .. } | CriticalError::Unresolved(_))) => {
                last = Some(e);
                cell = cell.grown(PERTURB_STEP);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Newton on ζ′ from `z0`. Returns the converged point or `None`.
pub fn newton_refine(z0: Complex64, cfg: &EvalConfig) -> Result<Option<CriticalPoint>, ZetaError> {
    let mut z = z0;
    for _ in 0..NEWTON_ITERS {
        let j = zeta_jet(StripPoint::from(z), cfg)?;
        if j.d2.norm() == 0.0 {
            return Ok(None);
        }
        let step = j.d1 / j.d2;
        if !step.is_finite() {
            return Ok(None);
        }
        z -= step;
        if step.norm() <= 1e-13 * z.norm().max(1.0) {
            let j = zeta_jet(StripPoint::from(z), cfg)?;
            let residual = j.d1.norm();
            if residual > RESIDUAL_MAX {
                return Ok(None);
            }
            return Ok(Some(CriticalPoint {
                beta: z.re,
                gamma: z.im,
                zeta_value: j.value,
                log_abs_zeta: j.value.norm().ln(),
                residual,
            }));
        }
    }
    Ok(None)
}

fn search_cell(cell: SearchRectangle, cfg: &EvalConfig, out: &mut ScanOutcome) -> Result<(), CriticalError> {
    let mut stack = vec![cell];
    while let Some(c) = stack.pop() {
        let (c, n) = match count_with_retry(&c, cfg) {
            Ok(v) => v,
            Err(CriticalError::Zeta(e)) => return Err(CriticalError::Zeta(e)),
            Err(e) => {
                out.unresolved.push(UnresolvedCell {
                    rect: c,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if n == 0 {
            continue;
        }
        if n == 1 {
            if let Some(p) = newton_refine(c.center(), cfg)? {
                if c.contains(p.rho()) {
                    out.points.push(p);
                    continue;
                }
            }
        }
        if c.width().max(c.height()) < MIN_CELL {
            out.unresolved.push(UnresolvedCell {
                rect: c,
                reason: format!("{n} zero(s) in a cell below the size floor"),
            });
            continue;
        }
        let [a, b] = c.split();
        stack.push(b);
        stack.push(a);
    }
    Ok(())
}

fn finish(mut out: ScanOutcome) -> ScanOutcome {
    out.points
        .sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
    let mut kept: Vec<CriticalPoint> = Vec::with_capacity(out.points.len());
    for p in out.points {
        let dup = kept
            .iter()
            .rev()
            .take_while(|q| p.gamma - q.gamma < DEDUP_DIST)
            .any(|q| (q.rho() - p.rho()).norm() < DEDUP_DIST);
        if !dup {
            kept.push(p);
        }
    }
    out.points = kept;
    out
}

/// All zeros of ζ′ in `rect`, sorted by ordinate.
///
/// The rectangle is cut into horizontal slabs of unit height which are
/// searched in parallel; cells with more than one zero are halved until
/// Newton from the centre lands inside. Cells that cannot be settled are
/// reported in [`ScanOutcome::unresolved`] rather than failing the scan.
pub fn find_critical_points(rect: &SearchRectangle, cfg: &EvalConfig) -> Result<ScanOutcome, CriticalError> {
    cfg.validate()?;
    let Some(r) = clamp_to_pole(rect) else {
        return Ok(ScanOutcome::default());
    };
    let slabs = (r.height() / SLAB_HEIGHT).ceil().max(1.0) as usize;
    let cells: Vec<SearchRectangle> = (0..slabs)
        .map(|i| SearchRectangle {
            t_lo: r.t_lo + r.height() * i as f64 / slabs as f64,
            t_hi: if i + 1 == slabs {
                r.t_hi
            } else {
                r.t_lo + r.height() * (i + 1) as f64 / slabs as f64
            },
            ..r
        })
        .collect();
    let parts: Vec<Result<ScanOutcome, CriticalError>> = cells
        .par_iter()
        .map(|c| {
            let mut o = ScanOutcome::default();
            search_cell(*c, cfg, &mut o).map(|_| o)
        })
        .collect();
    let mut all = ScanOutcome::default();
    for p in parts {
        let p = p?;
        all.points.extend(p.points);
        all.unresolved.extend(p.unresolved);
    }
    // perturbed cells may poke outside the request
    all.points.retain(|p| r.contains(p.rho()));
    Ok(finish(all))
}

/// Points with `sigma1 < β′ < sigma2`, in input order.
pub fn strip_filter(points: &[CriticalPoint], sigma1: f64, sigma2: f64) -> Result<Vec<CriticalPoint>, CriticalError> {
    if !(0.5 < sigma1 && sigma1 < sigma2 && sigma2 < 1.0) {
        return Err(CriticalError::InvalidArgument(format!(
            "window ({sigma1}, {sigma2}) not inside (1/2, 1)"
        )));
    }
    Ok(points
        .iter()
        .filter(|p| p.beta > sigma1 && p.beta < sigma2)
        .copied()
        .collect())
}
