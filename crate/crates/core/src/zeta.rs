//! Euler–Maclaurin evaluation of ζ(s) and its first two derivatives.
//!
//! All three quantities come out of one pass over the main sum: each term is
//! carried as a second-order jet in `s`, so ζ′ and ζ″ are exact derivatives
//! of the same truncated expansion rather than difference quotients.

use std::cell::RefCell;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::number_theory::{sieve, LambdaTable, PrimeTable};
use crate::quad;

/// Height window in which the engine is used.
pub const MAX_HEIGHT: f64 = 1.0e6;

/// Upper end of the horizontal ray for the log ζ path integral.
pub const RAY_END: f64 = 40.0;

/// B_{2k} / (2k)! for k = 1..=30.
const BERNOULLI_RATIO: [f64; 30] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_888_9e-3,
    3.306_878_306_878_306_9e-5,
    -8.267_195_767_195_767_2e-7,
    2.087_675_698_786_809_9e-8,
    -5.284_190_138_687_493_2e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_9e-13,
    8.586_062_056_277_844_6e-15,
    -2.174_868_698_558_061_9e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_3e-19,
    3.534_707_039_629_467_5e-21,
    -8.953_517_427_037_546_9e-23,
    2.267_952_452_337_683_1e-24,
    -5.744_790_668_872_202_4e-26,
    1.455_172_475_614_864_9e-27,
    -3.685_994_940_665_310_2e-29,
    9.336_734_257_095_044_7e-31,
    -2.365_022_415_700_629_9e-32,
    5.990_671_762_482_134_3e-34,
    -1.517_454_884_468_290_3e-35,
    3.843_758_125_454_188_2e-37,
    -9.736_353_072_646_691e-39,
    2.466_247_044_200_681e-40,
    -6.247_076_741_820_743_7e-42,
    1.582_403_024_464_491_4e-43,
    -4.008_273_685_948_936e-45,
    1.015_307_585_556_955_6e-46,
    -2.571_804_158_241_871_7e-48,
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("s = 1 is the pole of zeta")]
    Pole,
    #[error("zeta vanishes at {0} (|zeta| = {1:e})")]
    ZeroOfZeta(Complex64, f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("horizontal ray from {0} is blocked by a zero of zeta near y = {1}")]
    RayBlocked(Complex64, f64),
}

/// A point `sigma + i t` of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPoint {
    pub sigma: f64,
    pub t: f64,
}

impl StripPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self, ZetaError> {
        if !sigma.is_finite() || !t.is_finite() {
            return Err(ZetaError::InvalidArgument(format!(
                "non-finite point {sigma} + {t}i"
            )));
        }
        Ok(Self { sigma, t })
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    /// Whether the point sits in the region where the accuracy contract holds.
    pub fn within_guarantee(self) -> bool {
        self.t.abs() <= MAX_HEIGHT && (-2.0..=10.0).contains(&self.sigma)
    }
}

impl From<Complex64> for StripPoint {
    fn from(z: Complex64) -> Self {
        Self { sigma: z.re, t: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub target_rel_error: f64,
    /// Floor on the main-sum length; the length actually used is
    /// `max(em_terms, ceil(1.3 |t|))`.
    pub em_terms: usize,
    pub bernoulli_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            target_rel_error: 1e-10,
            em_terms: 20,
            bernoulli_terms: 20,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), ZetaError> {
        if !(self.target_rel_error >= 1e-12) {
            return Err(ZetaError::InvalidArgument(format!(
                "target_rel_error {} below 1e-12",
                self.target_rel_error
            )));
        }
        if self.em_terms == 0 || self.bernoulli_terms == 0 || self.bernoulli_terms > 30 {
            return Err(ZetaError::InvalidArgument(format!(
                "em_terms = {}, bernoulli_terms = {} (need em_terms >= 1, 1 <= bernoulli_terms <= 30)",
                self.em_terms, self.bernoulli_terms
            )));
        }
        Ok(())
    }

    pub fn main_terms(&self, t: f64) -> usize {
        self.em_terms.max((1.3 * t.abs()).ceil() as usize)
    }
}

/// ζ together with ζ′ and ζ″ at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaJet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

/// Truncated Taylor jet (f, f′, f″).
#[derive(Debug, Clone, Copy)]
struct Jet([Complex64; 3]);

impl Jet {
    fn linear(s: Complex64, shift: f64) -> Self {
        Jet([s + shift, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
    }

    fn scale(self, k: f64) -> Self {
        Jet([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }

    fn recip(self) -> Self {
        let [g0, g1, g2] = self.0;
        let inv = g0.inv();
        let inv2 = inv * inv;
        Jet([inv, -g1 * inv2, (g1 * g1 * 2.0 - g0 * g2) * inv2 * inv])
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let [a, b, c] = self.0;
        let [d, e, g] = o.0;
        Jet([a * d, a * e + b * d, a * g + b * e * 2.0 + c * d])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

const FACTOR_TABLE_SIZE: usize = 2_700_000;

fn factor_table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| sieve(FACTOR_TABLE_SIZE).expect("factor table size is within the sieve cap"))
}

thread_local! {
    static POWERS: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

/// Σ_{n<N} n^{-s} and its first two s-derivatives.
///
/// n^{-s} is built multiplicatively from the smallest-factor table, so only
/// prime bases pay for an exponential.
fn main_sum(s: Complex64, n_main: usize) -> Jet {
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    if n_main <= 1 {
        return Jet(acc);
    }
    let upper = n_main - 1;
    if upper >= FACTOR_TABLE_SIZE {
        for n in 1..=upper {
            let ln = (n as f64).ln();
            let a = (-s * ln).exp();
            acc[0] += a;
            acc[1] -= a * ln;
            acc[2] += a * (ln * ln);
        }
        return Jet(acc);
    }
    let spf = factor_table();
    POWERS.with(|cell| {
        let mut pw = cell.borrow_mut();
        pw.clear();
        pw.resize(upper + 1, Complex64::new(0.0, 0.0));
        pw[1] = Complex64::new(1.0, 0.0);
        acc[0] = pw[1];
        for n in 2..=upper {
            let p = spf.smallest_factor(n).unwrap_or(n as u32) as usize;
            let ln = (n as f64).ln();
            let a = if p == n {
                (-s * ln).exp()
            } else {
                pw[p] * pw[n / p]
            };
            pw[n] = a;
            acc[0] += a;
            acc[1] -= a * ln;
            acc[2] += a * (ln * ln);
        }
    });
    Jet(acc)
}

fn em_jet(s: Complex64, n_main: usize, bernoulli_terms: usize) -> Result<Jet, ZetaError> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(ZetaError::Pole);
    }
    let big_n = n_main as f64;
    let ln_n = big_n.ln();
    let u = (-s * ln_n).exp();
    let tail_power = Jet([u, -u * ln_n, u * (ln_n * ln_n)]);

    let mut total = main_sum(s, n_main);
    total = total + tail_power.scale(big_n) * Jet::linear(s, -1.0).recip();
    total = total + tail_power.scale(0.5);

    let inv_n2 = 1.0 / (big_n * big_n);
    let mut rising = Jet::linear(s, 0.0);
    let mut n_factor = 1.0 / big_n;
    for (k, coef) in BERNOULLI_RATIO.iter().enumerate().take(bernoulli_terms) {
        let term = (rising * tail_power).scale(coef * n_factor);
        total = total + term;
        let k = k + 1;
        rising = rising * Jet::linear(s, (2 * k - 1) as f64) * Jet::linear(s, (2 * k) as f64);
        n_factor *= inv_n2;
    }
    Ok(total)
}

fn checked(s: StripPoint, cfg: &EvalConfig) -> Result<Complex64, ZetaError> {
    cfg.validate()?;
    if s.t.abs() > MAX_HEIGHT {
        return Err(ZetaError::InvalidArgument(format!(
            "|t| = {} exceeds the engine window {MAX_HEIGHT}",
            s.t.abs()
        )));
    }
    Ok(s.to_complex())
}

/// ζ, ζ′ and ζ″ at `s`.
pub fn zeta_jet(s: StripPoint, cfg: &EvalConfig) -> Result<ZetaJet, ZetaError> {
    let z = checked(s, cfg)?;
    let j = em_jet(z, cfg.main_terms(s.t), cfg.bernoulli_terms)?;
    Ok(ZetaJet {
        value: j.0[0],
        d1: j.0[1],
        d2: j.0[2],
    })
}

pub fn zeta(s: StripPoint, cfg: &EvalConfig) -> Result<Complex64, ZetaError> {
    zeta_jet(s, cfg).map(|j| j.value)
}

pub fn zeta_prime(s: StripPoint, cfg: &EvalConfig) -> Result<Complex64, ZetaError> {
    zeta_jet(s, cfg).map(|j| j.d1)
}

pub fn zeta_second(s: StripPoint, cfg: &EvalConfig) -> Result<Complex64, ZetaError> {
    zeta_jet(s, cfg).map(|j| j.d2)
}

/// Relative change of ζ(s) when the main sum is doubled in length.
pub fn zeta_error_estimate(s: StripPoint, cfg: &EvalConfig) -> Result<f64, ZetaError> {
    let z = checked(s, cfg)?;
    let n = cfg.main_terms(s.t);
    let a = em_jet(z, n, cfg.bernoulli_terms)?.0[0];
    let b = em_jet(z, 2 * n, cfg.bernoulli_terms)?.0[0];
    Ok((a - b).norm() / b.norm().max(f64::MIN_POSITIVE))
}

/// −ζ′/ζ(s).
pub fn log_deriv(s: StripPoint, cfg: &EvalConfig) -> Result<Complex64, ZetaError> {
    let j = zeta_jet(s, cfg)?;
    let m = j.value.norm();
    if m < 1e-15 {
        return Err(ZetaError::ZeroOfZeta(s.to_complex(), m));
    }
    Ok(-j.d1 / j.value)
}

fn dirichlet_lambda_sum<F: Fn(f64) -> f64>(s: Complex64, limit: f64, weight: F) -> Result<Complex64, ZetaError> {
    if limit < 2.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let table = LambdaTable::new(limit.floor() as usize)
        .map_err(|e| ZetaError::InvalidArgument(e.to_string()))?;
    Ok(table
        .powers_up_to(limit)
        .iter()
        .map(|pp| (-s * pp.log_n).exp() * (pp.lambda * weight(pp.n as f64)))
        .sum())
}

/// Σ_{n <= log² T} Λ(n) n^{-s}, the short Dirichlet polynomial standing in
/// for −ζ′/ζ(s) at height T.
pub fn truncated_log_deriv(s: StripPoint, height: f64) -> Result<Complex64, ZetaError> {
    if !(height >= 4.0) || height > MAX_HEIGHT {
        return Err(ZetaError::InvalidArgument(format!(
            "height T = {height} outside [4, {MAX_HEIGHT}]"
        )));
    }
    if !(s.sigma >= 0.5) {
        return Err(ZetaError::InvalidArgument(format!(
            "sigma = {} below 1/2",
            s.sigma
        )));
    }
    let len = height.ln().powi(2);
    dirichlet_lambda_sum(s.to_complex(), len, |_| 1.0)
}

/// Smoothing weight: 1 up to `y = T^{d1/8}`, then `1 - log(u/y)/log y`
/// down to 0 at `y² = T^{d1/4}`.
pub fn explicit_weight(u: f64, height: f64, d1: f64) -> f64 {
    let log_y = d1 * height.ln() / 8.0;
    let log_u = u.ln();
    if log_u <= log_y {
        1.0
    } else if log_u <= 2.0 * log_y {
        1.0 - (log_u - log_y) / log_y
    } else {
        0.0
    }
}

/// Σ_{n <= T^{d1/4}} w(n) Λ(n) n^{-s-iτ}.
pub fn weighted_truncated_log_deriv(
    s: StripPoint,
    tau: f64,
    height: f64,
    d1: f64,
) -> Result<Complex64, ZetaError> {
    if !(d1 > 0.0 && d1 < 0.5) {
        return Err(ZetaError::InvalidArgument(format!("d1 = {d1} outside (0, 1/2)")));
    }
    if !(height >= 4.0) || !height.is_finite() {
        return Err(ZetaError::InvalidArgument(format!("height T = {height} below 4")));
    }
    let len = (d1 * height.ln() / 4.0).exp();
    let shifted = Complex64::new(s.sigma, s.t + tau);
    dirichlet_lambda_sum(shifted, len, |u| explicit_weight(u, height, d1))
}

/// log ζ(ρ) as ∫_{β}^{∞} −ζ′/ζ(y + iγ) dy, with the branch fixed by
/// continuity from the right. The integral is cut at `y = 40`, where the
/// integrand is below 1e-12.
pub fn log_zeta_via_integral(rho: StripPoint, cfg: &EvalConfig) -> Result<Complex64, ZetaError> {
    checked(rho, cfg)?;
    if rho.sigma >= RAY_END {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if rho.sigma <= 0.5 && rho.t.abs() < 1.0 {
        return Err(ZetaError::RayBlocked(rho.to_complex(), 1.0));
    }
    let gamma = rho.t;
    let integrand = |y: f64| -> Result<Complex64, ZetaError> {
        let j = em_jet(Complex64::new(y, gamma), cfg.main_terms(gamma), cfg.bernoulli_terms)?;
        let m = j.0[0].norm();
        let v = -j.0[1] / j.0[0];
        if m < 1e-10 || !(v.norm() < 1e8) {
            return Err(ZetaError::RayBlocked(rho.to_complex(), y));
        }
        Ok(v)
    };
    // Panels widen geometrically; the integrand decays like 2^{-y}.
    let mut edges = vec![rho.sigma];
    let mut y = rho.sigma;
    let mut width = 0.25;
    while y < RAY_END {
        y = (y + width).min(RAY_END);
        edges.push(y);
        width *= 1.6;
    }
    let mut total = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        total += quad::gauss_kronrod(&integrand, w[0], w[1], 1e-11, 40)?;
    }
    Ok(total)
}
