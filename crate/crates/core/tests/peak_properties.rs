use critzeta_core::kronecker::{
    build_peak_polynomial, excluded_set, h_of_t, measure, safe_epsilon, search_tau, second_moment, verify_tau,
    Interval, TargetSet, TrigPolynomial,
};
use critzeta_core::zeta::StripPoint;
use num_complex::Complex64;
use proptest::collection::vec;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn parseval(coeffs in vec((-1.0f64..1.0, -1.0f64..1.0), 1..24)) {
        let cs: Vec<Complex64> = coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let f = TrigPolynomial::from_coeffs(cs, 0.1).unwrap();
        let n = 4 * (f.degree + 1);
        let grid: f64 = (0..n).map(|i| f.abs2(i as f64 / n as f64)).sum::<f64>() / n as f64;
        prop_assert!((grid - second_moment(&f)).abs() <= 1e-6);
    }

    #[test]
    fn moment_floor(k in 1usize..60, delta in 0.02f64..0.5) {
        let f = build_peak_polynomial(k, delta).unwrap();
        prop_assert!(second_moment(&f) >= 1.0 / (k as f64 + 1.0) - 1e-12);
    }

    #[test]
    fn excluded_and_retained_partition(
        height in 100.0f64..1e5,
        d1 in 0.05f64..0.45,
        zeros in vec((0.0f64..0.25, -0.2f64..1.2), 0..12),
    ) {
        let pts: Vec<StripPoint> = zeros
            .iter()
            .map(|&(extra, u)| StripPoint::new((1.0 + d1) / 2.0 + extra, height * (1.0 + u)).unwrap())
            .collect();
        let split = excluded_set(height, d1, &pts).unwrap();
        let total = measure(&split.excluded) + measure(&split.retained);
        prop_assert!((total - height).abs() <= 1e-9 * height);
    }

    #[test]
    fn positive_h_implies_targets_hit(
        k in 4usize..16,
        delta in 0.05f64..0.2,
        betas in vec(0.0f64..1.0, 1..4),
        t0 in 0.0f64..5e3,
    ) {
        let primes: Vec<u32> = [2, 3, 5, 7].into_iter().take(betas.len()).collect();
        let targets = TargetSet::new(primes, betas, delta).unwrap();
        let f = build_peak_polynomial(k, delta).unwrap();
        let eps = safe_epsilon(&f);
        for tau in search_tau(&[Interval::new(t0, t0 + 500.0).unwrap()], &f, &targets, eps).unwrap() {
            prop_assert!(h_of_t(tau, &f, &targets, eps).unwrap() > 0.0);
            prop_assert!(verify_tau(tau, &targets), "tau = {}", tau);
        }
    }
}
