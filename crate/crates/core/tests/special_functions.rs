use num_complex::Complex64;
use proptest::prelude::*;
use semiflight_core::special_fn::{
    beta_reg_cdf, ml_eval, ml_integral, ml_series, ml_survival, talbot_invert, TalbotConfig,
};

/// Tanh-sinh quadrature on (0, 1); tolerates integrable endpoint singularities.
fn tanh_sinh(f: impl Fn(f64) -> f64) -> f64 {
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    for k in -400..=400 {
        let s = k as f64 * h;
        let u = std::f64::consts::FRAC_PI_2 * s.sinh();
        let x = 0.5 * (1.0 + u.tanh());
        let w = 0.5 * std::f64::consts::FRAC_PI_2 * s.cosh() / u.cosh().powi(2);
        if x > 0.0 && x < 1.0 && w > 1e-300 {
            sum += w * f(x);
        }
    }
    sum * h
}

#[test]
fn series_and_integral_agree_on_the_overlap() {
    for &alpha in &[0.05, 0.2, 0.5, 0.6, 0.8, 0.95, 0.999] {
        // Beyond |x| = 1 the series is only usable once Γ(αk+1) outgrows x^k.
        let reach: &[f64] = if alpha >= 0.5 { &[-1.5, -2.5] } else { &[] };
        for &x in [-0.3, -0.6, -0.9, -1.0].iter().chain(reach) {
            let s = ml_series(alpha, x);
            let q = ml_integral(alpha, x).unwrap();
            assert!((s - q).abs() < 1e-11, "alpha={alpha} x={x}: {s} vs {q}");
        }
    }
}

#[test]
fn half_order_matches_complementary_error_function() {
    for &x in &[0.01f64, 0.3, 1.0, 2.0, 5.0, 12.0] {
        let exact = (x * x).exp() * libm::erfc(x);
        let ml = ml_eval(0.5, -x).unwrap();
        assert!((ml - exact).abs() < 1e-12 * exact.max(1e-3), "x={x}");
    }
}

#[test]
fn unit_order_is_exponential() {
    for &x in &[0.0, 0.5, 3.0, 40.0] {
        assert!((ml_eval(1.0, -x).unwrap() - (-x).exp()).abs() < 1e-15);
    }
}

#[test]
fn survival_matches_talbot_inversion_of_its_laplace_transform() {
    let cfg = TalbotConfig::default();
    for &alpha in &[0.3, 0.6, 0.9] {
        for &theta in &[0.5, 1.0, 2.0] {
            for &t in &[0.1, 0.5, 1.0, 3.0, 10.0] {
                let f = |l: Complex64| l.powf(alpha - 1.0) / (l.powf(alpha) + theta);
                let inv = talbot_invert(f, t, cfg).unwrap();
                let ml = ml_survival(alpha, theta, t).unwrap();
                assert!(
                    (inv - ml).abs() < 1e-6,
                    "alpha={alpha} theta={theta} t={t}: {inv} vs {ml}"
                );
            }
        }
    }
}

#[test]
fn beta_cdf_closed_forms() {
    for &x in &[0.01f64, 0.2, 0.5, 0.77, 0.99] {
        let arcsine = 2.0 / std::f64::consts::PI * x.sqrt().asin();
        assert!((beta_reg_cdf(0.5, 0.5, x).unwrap() - arcsine).abs() < 1e-13);
        assert!((beta_reg_cdf(0.3, 1.0, x).unwrap() - x.powf(0.3)).abs() < 1e-13);
        assert!((beta_reg_cdf(1.0, 0.4, x).unwrap() - (1.0 - (1.0 - x).powf(0.4))).abs() < 1e-13);
    }
}

#[test]
fn beta_cdf_against_quadrature() {
    for &(a, b) in &[(0.6, 0.4), (0.4, 0.6), (0.3, 0.7), (0.9, 0.1)] {
        let norm = libm::tgamma(a + b) / (libm::tgamma(a) * libm::tgamma(b));
        for &x in &[0.05f64, 0.3, 0.6, 0.95] {
            // w = x r^{1/a} absorbs the w^{a-1} singularity.
            let oracle =
                tanh_sinh(|r| norm * x.powf(a) / a * (1.0 - x * r.powf(1.0 / a)).powf(b - 1.0));
            let got = beta_reg_cdf(a, b, x).unwrap();
            assert!(
                (got - oracle).abs() < 1e-9,
                "a={a} b={b} x={x}: {got} vs {oracle}"
            );
        }
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(ml_eval(0.0, -1.0).is_err());
    assert!(ml_eval(1.2, -1.0).is_err());
    assert!(ml_survival(0.5, -1.0, 1.0).is_err());
    assert!(beta_reg_cdf(0.5, 0.5, 1.5).is_err());
    assert!(talbot_invert(
        |l| 1.0 / l,
        1.0,
        TalbotConfig {
            node_count: 4,
            tolerance: 1e-8
        }
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ml_is_decreasing_and_bounded(alpha in 0.05f64..1.0, x in 0.0f64..50.0, dx in 1e-3f64..5.0) {
        let a = ml_eval(alpha, -x).unwrap();
        let b = ml_eval(alpha, -(x + dx)).unwrap();
        prop_assert!(b <= a + 1e-14);
        prop_assert!(b > 0.0 && a <= 1.0);
    }

    #[test]
    fn beta_cdf_reflection(a in 0.1f64..3.0, b in 0.1f64..3.0, x in 0.001f64..0.999) {
        let l = beta_reg_cdf(a, b, x).unwrap();
        let r = beta_reg_cdf(b, a, 1.0 - x).unwrap();
        prop_assert!((l + r - 1.0).abs() < 1e-11);
    }
}
