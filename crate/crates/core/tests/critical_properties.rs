use critzeta_core::critical::{count_zeros, find_critical_points, SearchRectangle};
use critzeta_core::zeta::{zeta_jet, EvalConfig, StripPoint};
use proptest::prelude::*;

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn count_is_additive_over_quarters(
        sigma_lo in 0.2f64..0.8,
        width in 0.3f64..2.0,
        t_lo in 10.0f64..800.0,
        height in 3.0f64..20.0,
    ) {
        let rect = SearchRectangle::new(sigma_lo, sigma_lo + width, t_lo, t_lo + height).unwrap();
        let whole = count_zeros(&rect, &cfg()).unwrap();
        let parts: u64 = rect.quarters().iter().map(|q| count_zeros(q, &cfg()).unwrap()).sum();
        prop_assert_eq!(whole, parts);
    }
}

#[test]
fn refined_points_satisfy_the_scan_invariants() {
    let rect = SearchRectangle::new(0.1, 5.0, 1.0, 400.0).unwrap();
    let out = find_critical_points(&rect, &cfg()).unwrap();
    assert!(out.unresolved.is_empty());
    assert_eq!(out.points.len() as u64, count_zeros(&rect, &cfg()).unwrap());
    for p in &out.points {
        let j = zeta_jet(StripPoint::new(p.beta, p.gamma).unwrap(), &cfg()).unwrap();
        assert!(j.d1.norm() <= 1e-8, "{p:?}");
        assert!((j.d1 / j.d2).norm() < 1e-9, "{p:?}");
        assert!(p.beta > 0.5, "{p:?}");
        assert!(p.residual <= 1e-8);
    }
    for w in out.points.windows(2) {
        assert!(w[0].gamma <= w[1].gamma);
    }
    for (i, a) in out.points.iter().enumerate() {
        for b in &out.points[i + 1..] {
            assert!((a.rho() - b.rho()).norm() >= 1e-6);
        }
    }
}

#[test]
fn newton_points_match_count_high_in_the_strip() {
    let rect = SearchRectangle::new(0.5, 1.0, 1000.0, 1100.0).unwrap();
    let out = find_critical_points(&rect, &cfg()).unwrap();
    assert!(out.unresolved.is_empty());
    let n = count_zeros(&rect, &cfg()).unwrap();
    assert!(n > 0);
    assert_eq!(out.points.len() as u64, n);
}
