//! Quadrature rules shared by the zeta and Kronecker modules.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel. Returns the Kronrod value and |K15 - G7|.
fn gk15_panel<E, F>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64), E>
where
    F: Fn(f64) -> Result<Complex64, E>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    kron *= h;
    gauss *= h;
    Ok((kron, (kron - gauss).norm()))
}

/// Adaptive Gauss–Kronrod (G7/K15) integration of a complex integrand.
///
/// Panels are bisected until each one's error estimate falls under its share
/// of `abs_tol`, or `max_depth` bisections have been spent on it.
pub fn gauss_kronrod<E, F>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<Complex64, E>
where
    F: Fn(f64) -> Result<Complex64, E>,
{
    let mut total = Complex64::new(0.0, 0.0);
    let mut stack = vec![(a, b, 0u32)];
    let width = (b - a).abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15_panel(f, lo, hi)?;
        let share = abs_tol * (hi - lo).abs() / width;
        if err <= share.max(1e-15 * val.norm()) || depth >= max_depth {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(total)
}

/// Composite Simpson rule with a step no larger than `max_step`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, max_step: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut n = ((b - a) / max_step).ceil() as usize;
    n = n.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let v = f(a + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn kronrod_exp() {
        let f = |x: f64| -> Result<Complex64, Infallible> { Ok(Complex64::new(x.exp(), x.sin())) };
        let v = gauss_kronrod(&f, 0.0, 3.0, 1e-13, 30).unwrap();
        assert!((v.re - (3f64.exp() - 1.0)).abs() < 1e-11);
        assert!((v.im - (1.0 - 3f64.cos())).abs() < 1e-12);
    }

    #[test]
    fn simpson_cubic_is_exact() {
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 0.5);
        assert!((v - 0.0).abs() < 1e-12);
        let w = simpson(|x| x.cos(), 0.0, std::f64::consts::PI / 2.0, 1e-3);
        assert!((w - 1.0).abs() < 1e-12);
    }
}
