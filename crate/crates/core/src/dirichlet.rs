//! Dirichlet polynomials over the von Mangoldt table: the plain sum V_x,
//! the signed sums W_x and Z_x, their prime-only and logarithmic variants,
//! and root and winding checks for the signed sums near σ₁.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::number_theory::{LambdaTable, NumberTheoryError, PrimePower};
use crate::winding::{track_phase, winding_from_phase, PhaseError, PhaseOptions, PhaseSample};
use crate::zeta::explicit_weight;

const ROOT_TOL: f64 = 1e-10;
const CONTOUR_FLOOR: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DirichletError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Table(#[from] NumberTheoryError),
    #[error("sign pattern built for x = {pattern_x}, sum requested at x = {x}")]
    PatternMismatch { pattern_x: f64, x: f64 },
    #[error("no sign change on [{lo}, {hi}]")]
    NoRootInWindow { lo: f64, hi: f64 },
    #[error("|sum| = {modulus:e} on the contour at {at}")]
    Degenerate { at: Complex64, modulus: f64 },
}

/// Which way the cutoff assigns signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// +1 on primes up to the cut, −1 above.
    W,
    /// −1 on primes up to the cut, +1 above.
    Z,
}

impl std::str::FromStr for Orientation {
    type Err = DirichletError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "W" => Ok(Orientation::W),
            "Z" => Ok(Orientation::Z),
            _ => Err(DirichletError::InvalidArgument(format!(
                "orientation must be W or Z, got {s:?}"
            ))),
        }
    }
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Orientation::W => "W",
            Orientation::Z => "Z",
        })
    }
}

/// Totally multiplicative ±1 assignment on prime powers up to `x`.
///
/// `cut >= x` is allowed; the W pattern is then all +1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignPattern {
    pub x: f64,
    pub cut: f64,
    pub orientation: Orientation,
}

impl SignPattern {
    pub fn new(x: f64, cut: f64, orientation: Orientation) -> Result<Self, DirichletError> {
        if !(x >= 0.0 && x.is_finite()) || !(cut > 0.0) {
            return Err(DirichletError::InvalidArgument(format!(
                "sign pattern needs x >= 0 and cut > 0, got x = {x}, cut = {cut}"
            )));
        }
        Ok(Self { x, cut, orientation })
    }

    /// All +1 up to `x`.
    pub fn all_ones(x: f64) -> Self {
        Self {
            x,
            cut: f64::INFINITY,
            orientation: Orientation::W,
        }
    }

    pub fn from_cutoff(spec: &CutoffSpec, orientation: Orientation) -> Self {
        Self {
            x: spec.x,
            cut: spec.c() * spec.x,
            orientation,
        }
    }

    pub fn prime_sign(&self, p: u32) -> f64 {
        let below = p as f64 <= self.cut;
        match (self.orientation, below) {
            (Orientation::W, true) | (Orientation::Z, false) => 1.0,
            _ => -1.0,
        }
    }

    pub fn sign(&self, pp: &PrimePower) -> f64 {
        let s = self.prime_sign(pp.p);
        if s < 0.0 && pp.k % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    fn check(&self, x: f64) -> Result<(), DirichletError> {
        if self.x != x {
            return Err(DirichletError::PatternMismatch { pattern_x: self.x, x });
        }
        Ok(())
    }
}

/// The cutoff constant `c` with `log c = −log2/(1−σ₁) + log2/((1−σ₁)² logᵃx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub sigma1: f64,
    pub a: f64,
    pub x: f64,
    pub log_c: f64,
}

impl CutoffSpec {
    pub fn c(&self) -> f64 {
        self.log_c.exp()
    }

    pub fn log_x(&self) -> f64 {
        self.x.ln()
    }

    /// `1 / logᵃx`, the natural scale of the root offset.
    pub fn scale(&self) -> f64 {
        self.log_x().powf(-self.a)
    }
}

/// Unguarded cutoff formula in terms of `log x`.
pub fn log_cutoff(sigma1: f64, a: f64, log_x: f64) -> f64 {
    let r = 1.0 - sigma1;
    -LN_2 / r + LN_2 / (r * r * log_x.powf(a))
}

pub fn cutoff_c(sigma1: f64, a: f64, x: f64) -> Result<CutoffSpec, DirichletError> {
    if !(sigma1 > 0.5 && sigma1 < 1.0) {
        return Err(DirichletError::InvalidArgument(format!("sigma1 = {sigma1} outside (1/2, 1)")));
    }
    if !(a > 2.0) || !a.is_finite() {
        return Err(DirichletError::InvalidArgument(format!("a = {a} must exceed 2")));
    }
    if !(x >= 2.0) || !x.is_finite() {
        return Err(DirichletError::InvalidArgument(format!("x = {x} below 2")));
    }
    Ok(CutoffSpec {
        sigma1,
        a,
        x,
        log_c: log_cutoff(sigma1, a, x.ln()),
    })
}

fn powers<'a>(table: &'a LambdaTable, x: f64) -> Result<&'a [PrimePower], DirichletError> {
    if x < 2.0 {
        return Ok(&[]);
    }
    table.check_x(x)?;
    Ok(table.powers_up_to(x))
}

fn n_pow(pp: &PrimePower, s: Complex64) -> Complex64 {
    (-s * pp.log_n).exp()
}

/// V_x(s) = Σ_{n<=x} Λ(n) n^{-s}.
pub fn v_sum(table: &LambdaTable, x: f64, s: Complex64) -> Result<Complex64, DirichletError> {
    Ok(powers(table, x)?.iter().map(|pp| n_pow(pp, s) * pp.lambda).sum())
}

/// Σ_{n<=x} sign(n) Λ(n) n^{-s}: W_x or Z_x depending on the pattern.
pub fn signed_sum(table: &LambdaTable, x: f64, s: Complex64, pattern: &SignPattern) -> Result<Complex64, DirichletError> {
    pattern.check(x)?;
    Ok(powers(table, x)?
        .iter()
        .map(|pp| n_pow(pp, s) * (pattern.sign(pp) * pp.lambda))
        .sum())
}

/// The signed sum together with its s-derivative.
pub fn signed_sum_with_derivative(
    table: &LambdaTable,
    x: f64,
    s: Complex64,
    pattern: &SignPattern,
) -> Result<(Complex64, Complex64), DirichletError> {
    pattern.check(x)?;
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for pp in powers(table, x)? {
        let term = n_pow(pp, s) * (pattern.sign(pp) * pp.lambda);
        v += term;
        d -= term * pp.log_n;
    }
    Ok((v, d))
}

/// Σ_{p<=x} a(p) log p / (pˢ − a(p)), the geometric-series resummation of
/// the signed sum over each prime.
pub fn prime_form_sum(table: &LambdaTable, x: f64, s: Complex64, pattern: &SignPattern) -> Result<Complex64, DirichletError> {
    if !(s.re > 0.5) {
        return Err(DirichletError::InvalidArgument(format!("Re s = {} not above 1/2", s.re)));
    }
    pattern.check(x)?;
    let mut total = Complex64::new(0.0, 0.0);
    for pp in powers(table, x)?.iter().filter(|pp| pp.k == 1) {
        let a = pattern.prime_sign(pp.p);
        let denom = (s * pp.log_n).exp() - a;
        assert!(denom.norm() > 0.0, "p^s = a(p) is impossible for Re s > 0");
        total += pp.lambda * a / denom;
    }
    Ok(total)
}

/// L_x(s) = Σ_{1<n<=x} sign(n) Λ(n) / (nˢ log n).
pub fn l_sum(table: &LambdaTable, x: f64, s: Complex64, pattern: &SignPattern) -> Result<Complex64, DirichletError> {
    pattern.check(x)?;
    Ok(powers(table, x)?
        .iter()
        .map(|pp| n_pow(pp, s) * (pattern.sign(pp) * pp.lambda / pp.log_n))
        .sum())
}

/// Main term of L_x(σ₁): `∓x^{1−σ₁} log c / ((1−σ₁) log²x)`, minus sign
/// for W, plus for Z.
pub fn l_sum_main_term(spec: &CutoffSpec, orientation: Orientation) -> f64 {
    let r = 1.0 - spec.sigma1;
    let lx = spec.log_x();
    let m = spec.x.powf(r) * spec.log_c / (r * lx * lx);
    match orientation {
        Orientation::W => -m,
        Orientation::Z => m,
    }
}

fn weighted_range(table: &LambdaTable, x: f64, height: f64, d1: f64) -> Result<(&[PrimePower], f64), DirichletError> {
    if !(height > 1.0) || !(d1 > 0.0) {
        return Err(DirichletError::InvalidArgument(format!("T = {height}, d1 = {d1}")));
    }
    let top = (d1 * height.ln() / 4.0).exp();
    if x >= top || top < 2.0 {
        return Ok((&[], top));
    }
    table.check_x(top)?;
    Ok((table.powers_between(x, top), top))
}

/// T_x(s) = Σ_{x<n<=T^{d1/4}} w(n) Λ(n) n^{-s} / log n.
pub fn t_sum(table: &LambdaTable, x: f64, height: f64, d1: f64, s: Complex64) -> Result<Complex64, DirichletError> {
    let (pw, _) = weighted_range(table, x, height, d1)?;
    Ok(pw
        .iter()
        .map(|pp| n_pow(pp, s) * (explicit_weight(pp.n as f64, height, d1) * pp.lambda / pp.log_n))
        .sum())
}

/// dT_x/ds = −Σ w(n) Λ(n) n^{-s}.
pub fn t_sum_derivative(table: &LambdaTable, x: f64, height: f64, d1: f64, s: Complex64) -> Result<Complex64, DirichletError> {
    let (pw, _) = weighted_range(table, x, height, d1)?;
    Ok(-pw
        .iter()
        .map(|pp| n_pow(pp, s) * (explicit_weight(pp.n as f64, height, d1) * pp.lambda))
        .sum::<Complex64>())
}

/// T_x restricted to primes.
pub fn t_sum_primes(table: &LambdaTable, x: f64, height: f64, d1: f64, s: Complex64) -> Result<Complex64, DirichletError> {
    let (pw, _) = weighted_range(table, x, height, d1)?;
    Ok(pw
        .iter()
        .filter(|pp| pp.k == 1)
        .map(|pp| n_pow(pp, s) * explicit_weight(pp.n as f64, height, d1))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaLogBounds {
    pub value: Complex64,
    pub upper: f64,
    pub lower: f64,
}

/// Σ_{1<n<=x} Λ(n) n^{-s} / log n with the envelope `±x^{1−σ}/((1−σ) log x)`.
pub fn lambda_log_sum_bounds(table: &LambdaTable, x: f64, s: Complex64) -> Result<LambdaLogBounds, DirichletError> {
    if !(s.re > 0.5 && s.re < 1.0) {
        return Err(DirichletError::InvalidArgument(format!("Re s = {} outside (1/2, 1)", s.re)));
    }
    if !(x >= 4.0) {
        return Err(DirichletError::InvalidArgument(format!("x = {x} below 4")));
    }
    let value = l_sum(table, x, s, &SignPattern::all_ones(x))?;
    let r = 1.0 - s.re;
    let env = x.powf(r) / (r * x.ln());
    Ok(LambdaLogBounds {
        value,
        upper: env,
        lower: -env,
    })
}

/// Σ_{p<=y} p^{-σ}.
pub fn prime_sigma_sum(table: &LambdaTable, y: f64, sigma: f64) -> Result<f64, DirichletError> {
    Ok(powers(table, y)?
        .iter()
        .filter(|pp| pp.k == 1)
        .map(|pp| (-sigma * pp.log_n).exp())
        .sum())
}

fn real_signed(table: &LambdaTable, pattern: &SignPattern, sigma: f64) -> Result<f64, DirichletError> {
    Ok(signed_sum(table, pattern.x, Complex64::new(sigma, 0.0), pattern)?.re)
}

/// Bisection root of the signed sum on the real segment `[lo, hi]`.
pub fn locate_real_root(table: &LambdaTable, pattern: &SignPattern, lo: f64, hi: f64) -> Result<f64, DirichletError> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = real_signed(table, pattern, a)?;
    let fb = real_signed(table, pattern, b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(DirichletError::NoRootInWindow { lo, hi });
    }
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        let fm = real_signed(table, pattern, m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Real root of the signed sum in `[σ₁ + ½/logᵃx, σ₁ + 2/logᵃx]`.
pub fn find_signed_root(table: &LambdaTable, spec: &CutoffSpec, orientation: Orientation) -> Result<f64, DirichletError> {
    let pattern = SignPattern::from_cutoff(spec, orientation);
    find_root_for_pattern(table, spec, &pattern)
}

pub fn find_root_for_pattern(table: &LambdaTable, spec: &CutoffSpec, pattern: &SignPattern) -> Result<f64, DirichletError> {
    let u = spec.scale();
    locate_real_root(table, pattern, spec.sigma1 + 0.5 * u, spec.sigma1 + 2.0 * u)
}

/// Winding of the signed sum around 0 along the circle of radius
/// `radius_factor/logᵃx` centred at `σ₁ + 1/logᵃx`.
pub fn contour_winding(
    table: &LambdaTable,
    spec: &CutoffSpec,
    orientation: Orientation,
    radius_factor: f64,
) -> Result<i64, DirichletError> {
    let pattern = SignPattern::from_cutoff(spec, orientation);
    winding_for_pattern(table, spec, &pattern, radius_factor)
}

pub fn winding_for_pattern(
    table: &LambdaTable,
    spec: &CutoffSpec,
    pattern: &SignPattern,
    radius_factor: f64,
) -> Result<i64, DirichletError> {
    if !(radius_factor > 0.0) {
        return Err(DirichletError::InvalidArgument(format!("radius factor {radius_factor}")));
    }
    let u = spec.scale();
    let center = Complex64::new(spec.sigma1 + u, 0.0);
    let radius = radius_factor * u;
    let point = |th: f64| center + Complex64::from_polar(radius, th);
    let f = |th: f64| -> Result<PhaseSample, DirichletError> {
        let (v, d) = signed_sum_with_derivative(table, pattern.x, point(th), pattern)?;
        let dz = Complex64::new(0.0, radius) * Complex64::from_polar(1.0, th);
        Ok(PhaseSample {
            value: v,
            rate: Some((d / v * dz).im),
        })
    };
    let opts = PhaseOptions {
        initial_step: 2.0 * PI / 64.0,
        min_modulus: CONTOUR_FLOOR,
        min_step: 1e-12,
    };
    let total = track_phase(&f, 0.0, 2.0 * PI, &opts).map_err(|e| match e {
        PhaseError::TooClose { at, modulus } => DirichletError::Degenerate { at: point(at), modulus },
        PhaseError::Unresolved { at } => DirichletError::Degenerate {
            at: point(at),
            modulus: f64::NAN,
        },
        PhaseError::Eval(e) => e,
    })?;
    winding_from_phase(total).ok_or(DirichletError::Degenerate {
        at: center,
        modulus: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> LambdaTable {
        LambdaTable::new(200_000).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cutoff_values() {
        let lc = log_cutoff(0.75, 2.0, 10.0);
        assert!((lc + 2.661_685).abs() < 1e-6);
        assert!((lc.exp() - 0.069_830).abs() < 1e-6);
        let far = cutoff_c(0.75, 2.5, 1e300).unwrap();
        assert!((far.log_c + 2.772_589).abs() < 1e-5);
        assert!(cutoff_c(0.5, 2.5, 100.0).is_err());
        assert!(cutoff_c(0.75, 2.0, 100.0).is_err());
        assert!(cutoff_c(0.75, 2.5, 1.5).is_err());
        let spec = cutoff_c(0.75, 2.5, 1e4).unwrap();
        assert!(spec.c() > 0.0 && spec.c() < 1.0);
    }

    #[test]
    fn v_sum_basics() {
        let t = table();
        assert_eq!(v_sum(&t, 1.5, c(0.5, 3.0)).unwrap(), c(0.0, 0.0));
        let v = v_sum(&t, 10.0, c(0.0, 0.0)).unwrap();
        assert!((v.re - 7.832_015).abs() < 1e-6);
        assert!((v.re - t.psi(10.0).unwrap()).abs() < 1e-12);
        assert!(v_sum(&t, 1e7, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn sign_pattern_rules() {
        let w = SignPattern::new(100.0, 10.0, Orientation::W).unwrap();
        let z = SignPattern::new(100.0, 10.0, Orientation::Z).unwrap();
        let t = LambdaTable::new(100).unwrap();
        for pp in t.powers_up_to(100.0) {
            let expect_w = if pp.p <= 10 { 1.0 } else { (-1f64).powi(pp.k as i32) };
            assert_eq!(w.sign(pp), expect_w, "{pp:?}");
            let expect_z = if pp.p <= 10 { (-1f64).powi(pp.k as i32) } else { 1.0 };
            assert_eq!(z.sign(pp), expect_z, "{pp:?}");
        }
        assert!(SignPattern::new(100.0, 0.0, Orientation::W).is_err());
    }

    #[test]
    fn signed_sums() {
        let t = table();
        let s = c(0.8, 7.0);
        let all = SignPattern::new(1000.0, 1000.0, Orientation::W).unwrap();
        assert!((signed_sum(&t, 1000.0, s, &all).unwrap() - v_sum(&t, 1000.0, s).unwrap()).norm() < 1e-12);
        let other = SignPattern::new(999.0, 10.0, Orientation::W).unwrap();
        assert!(matches!(
            signed_sum(&t, 1000.0, s, &other),
            Err(DirichletError::PatternMismatch { .. })
        ));
        // Z = −W apart from even prime powers, which both count with +1
        let w = SignPattern::new(1e4, 300.0, Orientation::W).unwrap();
        let z = SignPattern::new(1e4, 300.0, Orientation::Z).unwrap();
        let sw = signed_sum(&t, 1e4, s, &w).unwrap();
        let sz = signed_sum(&t, 1e4, s, &z).unwrap();
        let even: Complex64 = t
            .powers_up_to(1e4)
            .iter()
            .filter(|pp| pp.k % 2 == 0)
            .map(|pp| n_pow(pp, s) * pp.lambda)
            .sum();
        assert!((sw + sz - even * 2.0).norm() < 1e-9);
        assert!((sw + sz).norm() < 10.0);
    }

    #[test]
    fn prime_form_against_direct_oracle() {
        let t = table();
        assert_eq!(prime_form_sum(&t, 1.9, c(2.0, 0.0), &SignPattern::all_ones(1.9)).unwrap(), c(0.0, 0.0));
        let v = prime_form_sum(&t, 1e4, c(2.0, 0.0), &SignPattern::all_ones(1e4)).unwrap();
        let mut oracle = 0.0;
        for p in 2..=10_000u64 {
            if (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                let pf = p as f64;
                oracle += pf.ln() / (pf * pf - 1.0);
            }
        }
        assert!((v.re - oracle).abs() < 1e-12);
        assert!(prime_form_sum(&t, 1e4, c(0.5, 0.0), &SignPattern::all_ones(1e4)).is_err());
    }

    #[test]
    fn lemma5_residual_fits_a_single_constant() {
        let t = table();
        let s = c(0.8, 0.0);
        for orientation in [Orientation::W, Orientation::Z] {
            let mut kappa: f64 = 0.0;
            for x in [1e2, 1e3, 1e4] {
                let p = SignPattern::new(x, 0.1 * x, orientation).unwrap();
                let r = (signed_sum(&t, x, s, &p).unwrap() - prime_form_sum(&t, x, s, &p).unwrap()).norm();
                kappa = kappa.max(r / x.powf(0.5 - s.re));
            }
            assert!(kappa <= 10.0, "{orientation}: {kappa}");
        }
    }

    #[test]
    fn w_identity_with_two_plain_sums() {
        let t = table();
        let (x, cut) = (1e4, 700.0);
        let s = c(0.8, 0.0);
        let p = SignPattern::new(x, cut, Orientation::W).unwrap();
        let w = signed_sum(&t, x, s, &p).unwrap();
        let e = w - (v_sum(&t, cut, s).unwrap() * 2.0 - v_sum(&t, x, s).unwrap());
        assert!(e.norm() <= 10.0 * x.powf(0.5 - 0.75), "{}", e.norm());
    }

    #[test]
    fn l_and_t_sums() {
        let t = table();
        assert_eq!(l_sum(&t, 1.0, c(0.7, 0.0), &SignPattern::all_ones(1.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(t_sum(&t, 100.0, 1e6, 0.25, c(0.8, 0.0)).unwrap(), c(0.0, 0.0));

        // T^{d1/4} = 400 with T = 400^{16}
        let height = 400f64.powi(16);
        let d1 = 0.25;
        let s = c(0.8, 2.0);
        let h = 1e-5;
        let fd = (t_sum(&t, 20.0, height, d1, s + h).unwrap() - t_sum(&t, 20.0, height, d1, s - h).unwrap()) / (2.0 * h);
        let d = t_sum_derivative(&t, 20.0, height, d1, s).unwrap();
        assert!((fd - d).norm() < 1e-6);

        let full = t_sum(&t, 20.0, height, d1, s).unwrap();
        let primes = t_sum_primes(&t, 20.0, height, d1, s).unwrap();
        assert!((full - primes).norm() <= 10.0 * 20f64.powf(0.5 - 0.8));
    }

    #[test]
    fn lambda_log_bounds_small() {
        let t = table();
        let b = lambda_log_sum_bounds(&t, 4.0, c(0.9, 5.0)).unwrap();
        let direct: f64 = [2f64, 3.0, 4.0]
            .iter()
            .map(|&n| t.get(n as u64).unwrap() / n.powf(0.9) / n.ln())
            .sum();
        assert!(b.value.norm() <= direct + 1e-12);
        assert_eq!(b.upper, -b.lower);
        assert!(lambda_log_sum_bounds(&t, 3.0, c(0.9, 0.0)).is_err());
        assert!(lambda_log_sum_bounds(&t, 10.0, c(1.1, 0.0)).is_err());
    }

    #[test]
    fn degenerate_pattern_has_no_root_and_no_winding() {
        let t = table();
        let spec = cutoff_c(0.75, 2.5, 8f64.exp()).unwrap();
        let all = SignPattern::new(spec.x, spec.x, Orientation::W).unwrap();
        assert!(matches!(
            find_root_for_pattern(&t, &spec, &all),
            Err(DirichletError::NoRootInWindow { .. })
        ));
        assert_eq!(winding_for_pattern(&t, &spec, &all, 0.25).unwrap(), 0);
    }
    #[test]
    fn signed_roots_approach_sigma1_from_the_right() {
        let t = LambdaTable::new(200_000).unwrap();
        for orientation in [Orientation::W, Orientation::Z] {
            let mut last = f64::INFINITY;
            for lx in [8.0, 10.0, 12.0] {
                let spec = cutoff_c(0.75, 2.5, f64::exp(lx)).unwrap();
                let pattern = SignPattern::from_cutoff(&spec, orientation);
                let root = locate_real_root(&t, &pattern, 0.7501, 1.5).unwrap();
                assert!(root > 0.75 && root < last, "{orientation} log x = {lx}: {root}");
                last = root;
            }
        }
    }

    #[test]
    fn l_sum_main_term_sign() {
        let t = LambdaTable::new(200_000).unwrap();
        let spec = cutoff_c(0.75, 2.5, 1e5).unwrap();
        for orientation in [Orientation::W, Orientation::Z] {
            let pattern = SignPattern::from_cutoff(&spec, orientation);
            let l = l_sum(&t, spec.x, Complex64::new(0.75, 0.0), &pattern).unwrap().re;
            let main = l_sum_main_term(&spec, orientation);
            assert!(l * main > 0.0, "{orientation}: {l} vs {main}");
        }
        assert_eq!(
            l_sum_main_term(&spec, Orientation::W),
            -l_sum_main_term(&spec, Orientation::Z)
        );
    }
}
