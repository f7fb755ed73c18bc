//! Peak trigonometric polynomials and the search for heights τ at which
//! `τ log p / 2π` sits near prescribed targets modulo 1 for a set of primes.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dirichlet::Orientation;
use crate::quad::simpson;
use crate::zeta::StripPoint;

const TAIL_GRID: usize = 10_000;
const GOLDEN_ITERS: usize = 80;

/// Limits for the dense-quadrature mean-value checks.
pub const MAX_MEAN_PRIMES: usize = 6;
pub const MAX_MEAN_DEGREE: usize = 8;
pub const MAX_MEAN_HEIGHT: f64 = 1e4;
/// Searches beyond this many primes have a hit measure too small to see.
pub const MAX_SEARCH_PRIMES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KroneckerError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("epsilon = {epsilon:e} is below the squared tail supremum {floor:e}")]
    UnsafeEpsilon { epsilon: f64, floor: f64 },
    #[error("instance too large: {0}")]
    TooLarge(String),
}

/// `e(x) = exp(2πix)`.
fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Distance to the nearest integer.
pub fn frac_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// `f(θ) = Σ_{k=0}^{K} c_k e(−kθ)` with `f(0) = 1 = max |f|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub degree: usize,
    pub coeffs: Vec<Complex64>,
    pub measured_tail_sup: f64,
    pub delta: f64,
}

impl TrigPolynomial {
    /// Polynomial from explicit coefficients; the tail supremum is measured.
    pub fn from_coeffs(coeffs: Vec<Complex64>, delta: f64) -> Result<Self, KroneckerError> {
        if coeffs.is_empty() {
            return Err(KroneckerError::InvalidArgument("no coefficients".into()));
        }
        check_delta(delta)?;
        let mut f = Self {
            degree: coeffs.len() - 1,
            coeffs,
            measured_tail_sup: 0.0,
            delta,
        };
        f.measured_tail_sup = f.grid_sup(delta, 1.0 - delta, TAIL_GRID);
        Ok(f)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let z = e(-theta);
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn abs2(&self, theta: f64) -> f64 {
        self.eval(theta).norm_sqr()
    }

    /// max |f| over `n` evenly spaced points of `[lo, hi]`.
    pub fn grid_sup(&self, lo: f64, hi: f64, n: usize) -> f64 {
        if self.degree == 0 {
            return self.coeffs[0].norm();
        }
        let n = n.max(2);
        (0..n)
            .map(|i| self.eval(lo + (hi - lo) * i as f64 / (n - 1) as f64).norm())
            .fold(0.0, f64::max)
    }
}

fn check_delta(delta: f64) -> Result<(), KroneckerError> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(KroneckerError::InvalidArgument(format!("delta = {delta} outside (0, 1/2]")));
    }
    Ok(())
}

/// T_K(y)/T_K(x0) for `x0 > 1`, with `a0 = arccosh x0`.
fn chebyshev_ratio(k: usize, y: f64, a0: f64) -> f64 {
    let kf = k as f64;
    let norm = 1.0 + (-2.0 * kf * a0).exp();
    if y.abs() <= 1.0 {
        (kf * y.acos()).cos() * 2.0 * (-kf * a0).exp() / norm
    } else {
        let ay = y.abs().acosh();
        let sign = if y < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        sign * (kf * (ay - a0)).exp() * (1.0 + (-2.0 * kf * ay).exp()) / norm
    }
}

/// Degree-`K` peak polynomial with `|f| <= 2e^{−πKδ}` on `[δ, 1−δ]`.
///
/// Uses the Dolph–Chebyshev window
/// `f(θ) = e(−Kθ/2) T_K(cos πθ / cos πδ) / T_K(1 / cos πδ)`,
/// which is equiripple on the tail and peaks at `θ = 0`.
pub fn build_peak_polynomial(k: usize, delta: f64) -> Result<TrigPolynomial, KroneckerError> {
    check_delta(delta)?;
    if k == 0 {
        return Ok(TrigPolynomial {
            degree: 0,
            coeffs: vec![Complex64::new(1.0, 0.0)],
            measured_tail_sup: 1.0,
            delta,
        });
    }
    let coeffs = if delta == 0.5 {
        // limit cos^K: binomial weights
        let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
        let mut b = 1.0f64;
        for (j, cj) in c.iter_mut().enumerate() {
            *cj = Complex64::new(b * 0.5f64.powi(k as i32), 0.0);
            b = b * (k - j) as f64 / (j + 1) as f64;
        }
        c
    } else {
        let a0 = (1.0 / (PI * delta).cos()).acosh();
        let x0 = 1.0 / (PI * delta).cos();
        let m = k + 1;
        let samples: Vec<Complex64> = (0..m)
            .map(|j| {
                let th = j as f64 / m as f64;
                e(-(k as f64) * th / 2.0) * chebyshev_ratio(k, x0 * (PI * th).cos(), a0)
            })
            .collect();
        (0..m)
            .map(|kk| {
                samples
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * e((kk * j) as f64 / m as f64))
                    .sum::<Complex64>()
                    / m as f64
            })
            .collect()
    };
    TrigPolynomial::from_coeffs(coeffs, delta)
}

/// μ = ∫₀¹ |f|² = Σ |c_k|².
pub fn second_moment(f: &TrigPolynomial) -> f64 {
    f.coeffs.iter().map(|c| c.norm_sqr()).sum()
}

/// ε large enough that `h > 0` forces every target to be hit:
/// `max(4e^{−2πKδ}, 2·sup²)`.
pub fn safe_epsilon(f: &TrigPolynomial) -> f64 {
    let nominal = 4.0 * (-2.0 * PI * f.degree as f64 * f.delta).exp();
    nominal.max(2.0 * f.measured_tail_sup.powi(2))
}

/// `4e^{−2πKδ}`.
pub fn nominal_epsilon(k: usize, delta: f64) -> f64 {
    4.0 * (-2.0 * PI * k as f64 * delta).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSet {
    pub primes: Vec<u32>,
    pub betas: Vec<f64>,
    pub delta: f64,
}

impl TargetSet {
    pub fn new(primes: Vec<u32>, betas: Vec<f64>, delta: f64) -> Result<Self, KroneckerError> {
        check_delta(delta)?;
        if primes.len() != betas.len() {
            return Err(KroneckerError::InvalidArgument(format!(
                "{} primes but {} targets",
                primes.len(),
                betas.len()
            )));
        }
        let mut seen = primes.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != primes.len() || primes.iter().any(|&p| p < 2) {
            return Err(KroneckerError::InvalidArgument("primes must be distinct and >= 2".into()));
        }
        if betas.iter().any(|b| !b.is_finite()) {
            return Err(KroneckerError::InvalidArgument("non-finite target".into()));
        }
        Ok(Self { primes, betas, delta })
    }

    /// Targets 0 at and below `cut`, 1/2 above (W); swapped for Z.
    pub fn from_cutoff(primes: Vec<u32>, cut: f64, orientation: Orientation, delta: f64) -> Result<Self, KroneckerError> {
        let betas = primes
            .iter()
            .map(|&p| {
                let low = p as f64 <= cut;
                match (orientation, low) {
                    (Orientation::W, true) | (Orientation::Z, false) => 0.0,
                    _ => 0.5,
                }
            })
            .collect();
        Self::new(primes, betas, delta)
    }

    fn phases(&self, t: f64) -> impl Iterator<Item = f64> + '_ {
        self.primes
            .iter()
            .zip(&self.betas)
            .map(move |(&p, b)| t * (p as f64).ln() / (2.0 * PI) - b)
    }

    fn max_log_p(&self) -> f64 {
        self.primes.iter().map(|&p| (p as f64).ln()).fold(0.0, f64::max)
    }
}

/// g(t) = Π_p |f(t log p/2π − β_p)|².
pub fn g_of_t(t: f64, f: &TrigPolynomial, targets: &TargetSet) -> f64 {
    targets.phases(t).map(|th| f.abs2(th)).product()
}

fn h_unchecked(t: f64, f: &TrigPolynomial, targets: &TargetSet, epsilon: f64) -> f64 {
    let a: Vec<f64> = targets.phases(t).map(|th| f.abs2(th)).collect();
    let n = a.len();
    // prefix/suffix products give the leave-one-out terms without division
    let mut prefix = vec![1.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] * a[i];
    }
    let mut suffix = 1.0;
    let mut loo = 0.0;
    for i in (0..n).rev() {
        loo += prefix[i] * suffix;
        suffix *= a[i];
    }
    prefix[n] - epsilon * loo
}

/// h(t) = Π_p a_p − ε Σ_{p₁} Π_{p≠p₁} a_p with `a_p = |f(t log p/2π − β_p)|²`.
pub fn h_of_t(t: f64, f: &TrigPolynomial, targets: &TargetSet, epsilon: f64) -> Result<f64, KroneckerError> {
    check_epsilon(f, epsilon)?;
    Ok(h_unchecked(t, f, targets, epsilon))
}

fn check_epsilon(f: &TrigPolynomial, epsilon: f64) -> Result<(), KroneckerError> {
    let floor = f.measured_tail_sup.powi(2);
    if !(epsilon >= floor) {
        return Err(KroneckerError::UnsafeEpsilon { epsilon, floor });
    }
    Ok(())
}

/// ‖τ log p/2π − β_p‖ < δ for every target prime.
pub fn verify_tau(tau: f64, targets: &TargetSet) -> bool {
    targets.phases(tau).all(|th| frac_dist(th) < targets.delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub height: f64,
    pub sigma1: f64,
    pub d1: f64,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub k: Option<u64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub mu: Option<f64>,
    /// `exp(2Kx) <= T^{d1/4}`
    pub exp_condition: bool,
    pub feasible: bool,
}

/// Largest degree for which μ is actually computed in a parameter report.
const PARAM_MU_DEGREE: u64 = 4096;

/// The coupled parameters `x = d₁ log T / (4 (log log T)^b)`,
/// `K = ⌊(log x)^b / 2⌋`, `δ = (log x)^{1−b}`, `ε = 4e^{−2πKδ}`.
///
/// `x < 2` is reported as infeasible with the derived fields left empty.
pub fn choose_parameters(height: f64, sigma1: f64, a: f64, b: f64) -> Result<ParameterSet, KroneckerError> {
    if !(height >= 4.0) || !height.is_finite() {
        return Err(KroneckerError::InvalidArgument(format!("T = {height} below 4")));
    }
    if !(sigma1 > 0.5 && sigma1 < 1.0) {
        return Err(KroneckerError::InvalidArgument(format!("sigma1 = {sigma1} outside (1/2, 1)")));
    }
    if !(a > 1.0 && b > a + 1.0) || !b.is_finite() {
        return Err(KroneckerError::InvalidArgument(format!("need b > a + 1 > 2, got a = {a}, b = {b}")));
    }
    let d1 = sigma1 - 0.5;
    let log_t = height.ln();
    let x = d1 * log_t / (4.0 * log_t.ln().powf(b));
    let mut p = ParameterSet {
        height,
        sigma1,
        d1,
        a,
        b,
        x,
        k: None,
        delta: None,
        epsilon: None,
        mu: None,
        exp_condition: false,
        feasible: false,
    };
    if !(x >= 2.0) {
        return Ok(p);
    }
    let lx = x.ln();
    let k = (lx.powf(b) / 2.0).floor();
    let delta = lx.powf(1.0 - b);
    p.k = Some(k as u64);
    p.delta = Some(delta);
    p.epsilon = Some(4.0 * (-2.0 * PI * k * delta).exp());
    p.exp_condition = 2.0 * k * x <= d1 * log_t / 4.0;
    if (k as u64) <= PARAM_MU_DEGREE && delta <= 0.5 {
        let f = build_peak_polynomial(k as usize, delta)?;
        p.mu = Some(second_moment(&f));
    }
    p.feasible = p.exp_condition && delta <= 0.5;
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, KroneckerError> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(KroneckerError::InvalidArgument(format!("interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

pub fn measure(intervals: &[Interval]) -> f64 {
    intervals.iter().map(Interval::len).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedSet {
    pub excluded: Vec<Interval>,
    pub retained: Vec<Interval>,
}

/// Splits `[T, 2T]` into the part within `T^{d1/4} + 1` of an off-line zero
/// ordinate and the rest.
pub fn excluded_set(height: f64, d1: f64, off_line_zeros: &[StripPoint]) -> Result<ExcludedSet, KroneckerError> {
    if !(height > 0.0) || !(d1 > 0.0 && d1 < 0.5) {
        return Err(KroneckerError::InvalidArgument(format!("T = {height}, d1 = {d1}")));
    }
    let min_beta = (1.0 + d1) / 2.0;
    if let Some(z) = off_line_zeros.iter().find(|z| z.sigma < min_beta) {
        return Err(KroneckerError::InvalidArgument(format!(
            "zero at beta = {} is not beyond (1 + d1)/2 = {min_beta}",
            z.sigma
        )));
    }
    let half = height.powf(d1 / 4.0) + 1.0;
    let (lo, hi) = (height, 2.0 * height);
    let mut raw: Vec<Interval> = off_line_zeros
        .iter()
        .map(|z| Interval {
            lo: (z.t - half).max(lo),
            hi: (z.t + half).min(hi),
        })
        .filter(|i| i.hi > i.lo)
        .collect();
    raw.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut excluded: Vec<Interval> = Vec::new();
    for i in raw {
        match excluded.last_mut() {
            Some(last) if i.lo <= last.hi => last.hi = last.hi.max(i.hi),
            _ => excluded.push(i),
        }
    }
    let mut retained = Vec::new();
    let mut cur = lo;
    for i in &excluded {
        if i.lo > cur {
            retained.push(Interval { lo: cur, hi: i.lo });
        }
        cur = i.hi;
    }
    if cur < hi {
        retained.push(Interval { lo: cur, hi });
    }
    Ok(ExcludedSet { excluded, retained })
}

/// Sampling step that moves every phase `t log p / 2π` by at most δ/4.
pub fn grid_step(targets: &TargetSet) -> f64 {
    PI * targets.delta / (2.0 * targets.max_log_p().max(f64::MIN_POSITIVE))
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if b - a < 1e-12 * a.abs().max(1.0) {
            break;
        }
    }
    0.5 * (a + b)
}

fn grid_points(r: &Interval, step: f64) -> Vec<f64> {
    if r.is_empty() {
        return if r.len() == 0.0 { vec![r.lo] } else { Vec::new() };
    }
    let n = (r.len() / step).ceil() as usize;
    (0..=n).map(|i| (r.lo + i as f64 * step).min(r.hi)).collect()
}

/// Heights in `R` with `h > 0`: one golden-section refined maximiser per
/// run of consecutive positive grid samples, sorted ascending.
pub fn search_tau(
    retained: &[Interval],
    f: &TrigPolynomial,
    targets: &TargetSet,
    epsilon: f64,
) -> Result<Vec<f64>, KroneckerError> {
    check_epsilon(f, epsilon)?;
    if targets.primes.len() > MAX_SEARCH_PRIMES {
        return Err(KroneckerError::TooLarge(format!(
            "{} primes (at most {MAX_SEARCH_PRIMES})",
            targets.primes.len()
        )));
    }
    let step = grid_step(targets);
    let h = |t: f64| h_unchecked(t, f, targets, epsilon);
    let mut hits = Vec::new();
    for r in retained {
        let ts = grid_points(r, step);
        let hv: Vec<f64> = ts.par_iter().map(|&t| h(t)).collect();
        let mut i = 0;
        while i < ts.len() {
            if hv[i] <= 0.0 {
                i += 1;
                continue;
            }
            let start = i;
            while i < ts.len() && hv[i] > 0.0 {
                i += 1;
            }
            let best_grid = (start..i).max_by(|&a, &b| hv[a].total_cmp(&hv[b])).unwrap();
            let lo = ts[start.saturating_sub(1)];
            let hi = ts[i.min(ts.len() - 1)];
            let refined = golden_max(h, lo, hi).clamp(r.lo, r.hi);
            let tau = if h(refined) >= hv[best_grid] { refined } else { ts[best_grid] };
            hits.push(tau);
        }
    }
    hits.sort_by(f64::total_cmp);
    Ok(hits)
}

/// Fraction of grid samples of `R` at which `verify_tau` holds.
pub fn verified_fraction(retained: &[Interval], targets: &TargetSet, step: f64) -> f64 {
    let mut total = 0usize;
    let mut good = 0usize;
    for r in retained {
        let ts = grid_points(r, step);
        total += ts.len();
        good += ts.par_iter().filter(|&&t| verify_tau(t, targets)).count();
    }
    if total == 0 {
        0.0
    } else {
        good as f64 / total as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanComparison {
    pub measured: f64,
    pub predicted: f64,
}

impl MeanComparison {
    pub fn ratio(&self) -> f64 {
        self.measured / self.predicted
    }
}

fn check_small(f: &TrigPolynomial, targets: &TargetSet) -> Result<(), KroneckerError> {
    if targets.primes.len() > MAX_MEAN_PRIMES || f.degree > MAX_MEAN_DEGREE {
        return Err(KroneckerError::TooLarge(format!(
            "{} primes, degree {} (limits {MAX_MEAN_PRIMES}, {MAX_MEAN_DEGREE})",
            targets.primes.len(),
            f.degree
        )));
    }
    Ok(())
}

/// Quadrature step: a quarter of the search grid step.
fn quad_step(targets: &TargetSet, extra_log: f64) -> f64 {
    let l = targets.max_log_p().max(extra_log).max(f64::MIN_POSITIVE);
    PI * targets.delta / (2.0 * l) / 4.0
}

/// ∫_T^{2T} g(t) |Σ b_q q^{−it}|² dt against the mean-value prediction
/// `T Σ_n |C_n|²`, where `Σ C_n n^{−it}` is the expanded product.
pub fn mean_square_test(
    f: &TrigPolynomial,
    targets: &TargetSet,
    coeffs: &[(u32, Complex64)],
    height: f64,
) -> Result<MeanComparison, KroneckerError> {
    check_small(f, targets)?;
    if !(height > 0.0 && height <= MAX_MEAN_HEIGHT) {
        return Err(KroneckerError::TooLarge(format!("T = {height} (limit {MAX_MEAN_HEIGHT})")));
    }
    let mut basis: Vec<u32> = targets.primes.clone();
    for &(q, _) in coeffs {
        if !basis.contains(&q) {
            basis.push(q);
        }
    }
    let idx = |p: u32| basis.iter().position(|&b| b == p).unwrap();

    // coefficients of Π_p f(t log p/2π − β_p) keyed by exponent vectors
    let mut a: HashMap<Vec<u16>, Complex64> = HashMap::new();
    a.insert(vec![0; basis.len()], Complex64::new(1.0, 0.0));
    for (&p, &beta) in targets.primes.iter().zip(&targets.betas) {
        let j = idx(p);
        let mut next = HashMap::with_capacity(a.len() * f.coeffs.len());
        for (key, v) in &a {
            for (k, c) in f.coeffs.iter().enumerate() {
                let mut nk = key.clone();
                nk[j] += k as u16;
                *next.entry(nk).or_insert(Complex64::new(0.0, 0.0)) += v * c * e(k as f64 * beta);
            }
        }
        a = next;
    }
    let mut cm: HashMap<Vec<u16>, Complex64> = HashMap::new();
    for (key, v) in &a {
        for &(q, b) in coeffs {
            let mut nk = key.clone();
            nk[idx(q)] += 1;
            *cm.entry(nk).or_insert(Complex64::new(0.0, 0.0)) += v * b;
        }
    }
    let predicted = height * cm.values().map(|c| c.norm_sqr()).sum::<f64>();

    let extra = coeffs.iter().map(|&(q, _)| (q as f64).ln()).fold(0.0, f64::max);
    let integrand = |t: f64| {
        let b: Complex64 = coeffs
            .iter()
            .map(|&(q, c)| c * Complex64::from_polar(1.0, -t * (q as f64).ln()))
            .sum();
        g_of_t(t, f, targets) * b.norm_sqr()
    };
    let measured = par_simpson(&integrand, height, 2.0 * height, quad_step(targets, extra));
    Ok(MeanComparison { measured, predicted })
}

/// ∫_R h against `μ^{π(x)} |R|`. `epsilon = 0` integrates g itself.
pub fn mean_h_over_r(
    f: &TrigPolynomial,
    targets: &TargetSet,
    epsilon: f64,
    retained: &[Interval],
) -> Result<MeanComparison, KroneckerError> {
    check_small(f, targets)?;
    if epsilon != 0.0 {
        check_epsilon(f, epsilon)?;
    }
    let step = quad_step(targets, 0.0);
    let measured = retained
        .iter()
        .map(|r| par_simpson(&|t| h_unchecked(t, f, targets, epsilon), r.lo, r.hi, step))
        .sum();
    let predicted = second_moment(f).powi(targets.primes.len() as i32) * measure(retained);
    Ok(MeanComparison { measured, predicted })
}

/// Simpson over `[a, b]` split into independent blocks.
fn par_simpson<F: Fn(f64) -> f64 + Sync>(f: &F, a: f64, b: f64, step: f64) -> f64 {
    const BLOCK: f64 = 64.0;
    if b <= a {
        return 0.0;
    }
    let blocks = ((b - a) / BLOCK).ceil().max(1.0) as usize;
    (0..blocks)
        .into_par_iter()
        .map(|i| {
            let lo = a + (b - a) * i as f64 / blocks as f64;
            let hi = if i + 1 == blocks { b } else { a + (b - a) * (i + 1) as f64 / blocks as f64 };
            simpson(f, lo, hi, step)
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_polynomial() {
        let f = build_peak_polynomial(0, 0.1).unwrap();
        assert_eq!(f.measured_tail_sup, 1.0);
        assert_eq!(f.eval(0.37), Complex64::new(1.0, 0.0));
        assert_eq!(second_moment(&f), 1.0);
    }

    #[test]
    fn normalisation_and_peak() {
        for &(k, d) in &[(1, 0.2), (5, 0.5), (8, 0.1), (50, 0.05), (200, 0.05), (33, 0.013)] {
            let f = build_peak_polynomial(k, d).unwrap();
            let s: Complex64 = f.coeffs.iter().sum();
            assert!((s - 1.0).norm() < 1e-12, "K={k}: {s}");
            assert!(f.grid_sup(0.0, 1.0, 10_000) <= 1.0 + 1e-9);
            // analytic tail bound 2e^{−πKδ}, above the rounding floor of the coefficients
            let bound = (2.0 * (-PI * k as f64 * d).exp()).max(1e-12);
            assert!(f.measured_tail_sup <= bound * (1.0 + 1e-9), "K={k}: {}", f.measured_tail_sup);
        }
    }

    #[test]
    fn tail_decreases_with_degree() {
        let sups: Vec<f64> = [50, 100, 200, 400]
            .iter()
            .map(|&k| build_peak_polynomial(k, 0.05).unwrap().measured_tail_sup)
            .collect();
        assert!(sups[2] < 1.0);
        assert!(sups.windows(2).all(|w| w[1] < w[0]), "{sups:?}");
    }

    #[test]
    fn half_delta_is_binomial() {
        let f = build_peak_polynomial(4, 0.5).unwrap();
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0].map(|v| v / 16.0);
        for (c, e) in f.coeffs.iter().zip(expect) {
            assert!((c.re - e).abs() < 1e-15 && c.im == 0.0);
        }
    }

    #[test]
    fn equal_weights_hit_the_moment_floor() {
        let k = 7;
        let c = vec![Complex64::new(1.0 / (k + 1) as f64, 0.0); k + 1];
        let f = TrigPolynomial::from_coeffs(c, 0.2).unwrap();
        assert!((second_moment(&f) - 1.0 / (k + 1) as f64).abs() < 1e-15);
        let g = build_peak_polynomial(k, 0.2).unwrap();
        assert!(second_moment(&g) >= 1.0 / (k + 1) as f64);
    }

    #[test]
    fn g_and_h_basics() {
        let f = build_peak_polynomial(8, 0.1).unwrap();
        let empty = TargetSet::new(vec![], vec![], 0.1).unwrap();
        assert_eq!(g_of_t(3.3, &f, &empty), 1.0);
        let zero = TargetSet::new(vec![2, 3, 5], vec![0.0; 3], 0.1).unwrap();
        assert!((g_of_t(0.0, &f, &zero) - 1.0).abs() < 1e-12);
        let eps = safe_epsilon(&f);
        let h0 = h_of_t(0.0, &f, &zero, eps).unwrap();
        assert!((h0 - (1.0 - 3.0 * eps)).abs() < 1e-12 && h0 > 0.0);
        assert!(matches!(
            h_of_t(0.0, &f, &zero, 0.5 * f.measured_tail_sup.powi(2)),
            Err(KroneckerError::UnsafeEpsilon { .. })
        ));
        let one = TargetSet::new(vec![2], vec![0.0], 0.1).unwrap();
        // phase 0.25: far from 0
        let t = 0.25 * 2.0 * PI / 2f64.ln();
        assert!(!verify_tau(t, &one));
        assert!(h_of_t(t, &f, &one, eps).unwrap() <= 0.0);
    }

    #[test]
    fn verify_tau_cases() {
        let zero = TargetSet::new(vec![2, 3], vec![0.0, 0.0], 0.1).unwrap();
        assert!(verify_tau(0.0, &zero));
        let half = TargetSet::new(vec![2, 3], vec![0.0, 0.5], 0.1).unwrap();
        assert!(!verify_tau(0.0, &half));
        let two = TargetSet::new(vec![2], vec![0.0], 0.01).unwrap();
        assert!(verify_tau(2.0 * PI / 2f64.ln(), &two));
        assert!(TargetSet::new(vec![2, 2], vec![0.0, 0.0], 0.1).is_err());
    }

    #[test]
    fn target_orientation() {
        let w = TargetSet::from_cutoff(vec![2, 3, 5, 7], 4.0, Orientation::W, 0.1).unwrap();
        assert_eq!(w.betas, vec![0.0, 0.0, 0.5, 0.5]);
        let z = TargetSet::from_cutoff(vec![2, 3, 5, 7], 4.0, Orientation::Z, 0.1).unwrap();
        assert_eq!(z.betas, vec![0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn parameter_report() {
        let p = choose_parameters(1e6, 0.75, 2.1, 3.2).unwrap();
        assert!(!p.feasible && p.x < 2.0 && p.k.is_none());
        let expected = 0.25 * 1e6f64.ln() / 4.0 / 1e6f64.ln().ln().powf(3.2);
        assert!((p.x - expected).abs() < 1e-15);
        assert!(choose_parameters(1e6, 0.75, 2.1, 3.0).is_err());
        let big = choose_parameters(1e10, 0.75, 2.1, 3.2).unwrap();
        assert!(big.x.is_finite() && !big.feasible);
    }

    #[test]
    fn excluded_set_cases() {
        let t = 1000.0;
        let d1 = 0.25;
        let e = excluded_set(t, d1, &[]).unwrap();
        assert!(e.excluded.is_empty());
        assert_eq!(e.retained, vec![Interval { lo: t, hi: 2.0 * t }]);

        let z = StripPoint::new(0.7, 1.5 * t).unwrap();
        let e = excluded_set(t, d1, &[z]).unwrap();
        let half = t.powf(d1 / 4.0) + 1.0;
        assert_eq!(e.excluded, vec![Interval { lo: 1.5 * t - half, hi: 1.5 * t + half }]);
        assert!((measure(&e.excluded) + measure(&e.retained) - t).abs() < 1e-9);

        let z2 = StripPoint::new(0.9, 1.5 * t + half).unwrap();
        let e = excluded_set(t, d1, &[z2, z]).unwrap();
        assert_eq!(e.excluded.len(), 1);
        assert!((measure(&e.excluded) - 3.0 * half).abs() < 1e-9);
        assert!((measure(&e.excluded) + measure(&e.retained) - t).abs() < 1e-9);

        let low = StripPoint::new(0.6, 1.2 * t).unwrap();
        assert!(excluded_set(t, d1, &[low]).is_err());
    }

    #[test]
    fn search_single_prime_period() {
        let f = build_peak_polynomial(40, 0.05).unwrap();
        let targets = TargetSet::new(vec![2], vec![0.0], 0.05).unwrap();
        let eps = safe_epsilon(&f);
        let hits = search_tau(&[Interval::new(0.0, 200.0).unwrap()], &f, &targets, eps).unwrap();
        let period = 2.0 * PI / 2f64.ln();
        assert!(!hits.is_empty());
        for t in &hits {
            let m = (t / period).round();
            assert!((t - m * period).abs() < 1e-6, "{t}");
            assert!(verify_tau(*t, &targets));
        }
        assert!(search_tau(&[], &f, &targets, eps).unwrap().is_empty());
    }

    #[test]
    fn mean_values_trivial_cases() {
        let f = build_peak_polynomial(8, 0.1).unwrap();
        let targets = TargetSet::new(vec![2, 3], vec![0.0, 0.5], 0.1).unwrap();
        let m = mean_square_test(&f, &targets, &[(5, Complex64::new(0.0, 0.0))], 1000.0).unwrap();
        assert_eq!((m.measured, m.predicted), (0.0, 0.0));
        let none = TargetSet::new(vec![], vec![], 0.1).unwrap();
        let r = [Interval::new(10.0, 50.0).unwrap()];
        let m = mean_h_over_r(&f, &none, safe_epsilon(&f), &r).unwrap();
        assert!((m.measured - 40.0).abs() < 1e-9 && m.predicted == 40.0);
        let seven = TargetSet::new(vec![2, 3, 5, 7, 11, 13, 17], vec![0.0; 7], 0.1).unwrap();
        assert!(mean_h_over_r(&f, &seven, 0.0, &r).is_err());
    }
}
