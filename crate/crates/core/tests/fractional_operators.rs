use num_complex::Complex64;
use proptest::prelude::*;
use semiflight_core::fracops::{
    caputo_frac_deriv, frac_material_deriv, frac_material_deriv_at, verify_symbol, GridFn1D,
    GridFnST,
};
use semiflight_core::special_fn::{gamma, ml_eval};
use semiflight_core::Error;

/// Composite Gauss-Legendre (5 points) on [a, b] with `n` panels.
fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let mid = a + (k as f64 + 0.5) * h;
        for i in 0..5 {
            sum += W[i] * f(mid + 0.5 * h * X[i]);
        }
    }
    0.5 * h * sum
}

/// Defining integral of the material derivative for smooth `h`, with
/// `s = r^{1/(1-α)}` removing the singularity at `s = 0`.
fn material_oracle(h: impl Fn(f64, f64) -> f64, alpha: f64, v: f64, x: f64, t: f64) -> f64 {
    let p = 1.0 / (1.0 - alpha);
    let r_max = t.powf(1.0 - alpha);
    let body = gauss_legendre(
        |r| {
            let s = r.powf(p);
            (h(x, t) - h(x + v * s, t - s)) * p / s
        },
        0.0,
        r_max,
        400,
    );
    let g1 = gamma(1.0 - alpha);
    alpha / g1 * body + t.powf(-alpha) / g1 * (h(x, t) - h(x + v * t, 0.0))
}

fn max_error(d: &GridFn1D, exact: impl Fn(f64) -> f64) -> f64 {
    (1..d.len())
        .map(|k| (d.values[k] - exact(d.time(k))).abs())
        .fold(0.0, f64::max)
}

#[test]
fn power_function_benchmark() {
    let alpha = 0.4;
    let f = GridFn1D::from_fn(1e-3, 1001, |t| t).unwrap();
    let d = caputo_frac_deriv(&f, alpha).unwrap();
    let g = gamma(2.0 - alpha);
    assert!(max_error(&d, |t| t.powf(1.0 - alpha) / g) < 1e-3);
}

#[test]
fn refinement_rate_on_quadratic() {
    // D t² = 2 t^{2-α} / Γ(3-α); the scheme is exact on t itself.
    for &alpha in &[0.3, 0.6, 0.9] {
        let g = gamma(3.0 - alpha);
        let err = |n: usize| {
            let f = GridFn1D::from_fn(1.0 / n as f64, n + 1, |t| t * t).unwrap();
            max_error(&caputo_frac_deriv(&f, alpha).unwrap(), |t| {
                2.0 * t.powf(2.0 - alpha) / g
            })
        };
        let (coarse, fine) = (err(200), err(400));
        assert!(
            coarse / fine >= 2f64.powf(1.0 - alpha) * 0.9,
            "alpha={alpha}: {coarse} -> {fine}"
        );
    }
}

#[test]
fn mittag_leffler_eigenfunction_residual_shrinks() {
    let (alpha, theta) = (0.6, 1.0);
    let residual = |n: usize| {
        let f = GridFn1D::from_fn(2.0 / n as f64, n + 1, |t| {
            ml_eval(alpha, -theta * t.powf(alpha)).unwrap()
        })
        .unwrap();
        let d = caputo_frac_deriv(&f, alpha).unwrap();
        // Compare at the fixed times t = 0.5, 1, 2.
        [n / 4, n / 2, n]
            .iter()
            .map(|&k| (d.values[k] + theta * f.values[k]).abs())
            .fold(0.0, f64::max)
    };
    let r: Vec<f64> = [100, 200, 400, 800].iter().map(|&n| residual(n)).collect();
    assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
    assert!(r[3] < 0.02, "{r:?}");
}

#[test]
fn near_unit_order_is_a_backward_difference() {
    let f = GridFn1D::from_fn(0.01, 201, |t| (1.3 * t).sin()).unwrap();
    let d = caputo_frac_deriv(&f, 0.999).unwrap();
    for k in 100..201 {
        let fd = (f.values[k] - f.values[k - 1]) / f.dt;
        assert!((d.values[k] - fd).abs() < 0.02, "k={k}");
    }
}

#[test]
fn transported_profiles_are_annihilated() {
    let (v, dx) = (0.5, 0.01);
    let bump = |x: f64| (-(x * x) / 0.05).exp();
    // v dt = dx keeps every characteristic lookup on a grid node.
    let h = GridFnST::from_fn(-3.0, dx, 601, dx / v, 80, v, |x, t| bump(x + v * t)).unwrap();
    let d = frac_material_deriv(&h, 0.6).unwrap();
    let worst = d.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(worst < 1e-10, "worst={worst}");
}

#[test]
fn spatially_constant_data_reduces_to_caputo() {
    let phi = |t: f64| (0.7 * t).cos() + t * t;
    let h = GridFnST::from_fn(0.0, 0.1, 6, 0.01, 120, 0.0, |_, t| phi(t)).unwrap();
    let d = frac_material_deriv(&h, 0.45).unwrap();
    let f = GridFn1D::from_fn(0.01, 120, phi).unwrap();
    let c = caputo_frac_deriv(&f, 0.45).unwrap();
    for n in 0..120 {
        for j in 0..6 {
            assert_eq!(d.at(j, n), c.values[n]);
        }
    }
}

#[test]
fn separable_data_matches_direct_quadrature() {
    let (alpha, v) = (0.6, 0.8);
    // Compactly supported bump on (-0.6, 0.6).
    let rho = |x: f64| {
        let u = x / 0.6;
        if u.abs() < 1.0 {
            (-1.0 / (1.0 - u * u)).exp()
        } else {
            0.0
        }
    };
    let h_exact = |x: f64, t: f64| rho(x) * t;
    let dt = 5e-4;
    let h = GridFnST::from_fn(
        -1.0,
        v * dt,
        (2.6 / (v * dt)) as usize,
        dt,
        (1.0 / dt) as usize + 1,
        v,
        h_exact,
    )
    .unwrap();
    for p in 0..20 {
        let j = ((0.05 * p as f64 + 0.2) / (v * dt)) as usize;
        let n = ((0.1 + 0.045 * p as f64) / dt) as usize;
        let got = frac_material_deriv_at(&h, alpha, j, n).unwrap();
        let want = material_oracle(h_exact, alpha, v, h.x(j), n as f64 * h.dt);
        assert!((got - want).abs() < 1e-4, "probe {p}: {got} vs {want}");
    }
}

#[test]
fn boundary_support_is_enforced() {
    let h = GridFnST::from_fn(0.0, 0.1, 10, 0.1, 10, 1.0, |x, _| x).unwrap();
    assert!(matches!(
        frac_material_deriv(&h, 0.5),
        Err(Error::BoundarySupport { .. })
    ));
}

#[test]
fn symbol_residuals() {
    for &alpha in &[0.1, 0.3, 0.5, 0.8, 0.95] {
        for &lambda in &[0.25, 1.0, 2.0, 5.0] {
            for &(v, xi) in &[(0.0, 0.0), (1.0, 1.0), (-1.0, 2.5), (0.5, -6.0)] {
                let r = verify_symbol(alpha, v, xi, Complex64::new(lambda, 0.0)).unwrap();
                assert!(
                    r < 1e-8,
                    "alpha={alpha} lambda={lambda} xi v={}: {r}",
                    xi * v
                );
            }
        }
    }
    assert!(verify_symbol(0.5, 1.0, 1.0, Complex64::new(-1.0, 0.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn caputo_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, w in 0.1f64..5.0, alpha in 0.05f64..0.95) {
        let n = 60;
        let f = GridFn1D::from_fn(0.02, n, |t| (w * t).sin()).unwrap();
        let g = GridFn1D::from_fn(0.02, n, |t| t.exp()).unwrap();
        let mix = GridFn1D::new(0.02, f.values.iter().zip(&g.values).map(|(x, y)| a * x + b * y).collect()).unwrap();
        let (df, dg, dm) = (caputo_frac_deriv(&f, alpha).unwrap(), caputo_frac_deriv(&g, alpha).unwrap(), caputo_frac_deriv(&mix, alpha).unwrap());
        for k in 0..n {
            let lin = a * df.values[k] + b * dg.values[k];
            prop_assert!((dm.values[k] - lin).abs() <= 1e-9 * (1.0 + lin.abs()));
        }
    }

    #[test]
    fn material_derivative_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, v in -1.0f64..1.0, alpha in 0.05f64..0.95) {
        let bump = |x: f64, c: f64| (-(x - c) * (x - c) / 0.02).exp();
        let mk = |c: f64| GridFnST::from_fn(-2.0, 0.02, 201, 0.02, 30, v, |x, t| bump(x, c) * (1.0 + t)).unwrap();
        let (f, g) = (mk(-0.3), mk(0.4));
        let mut mix = f.clone();
        for (m, (x, y)) in mix.values.iter_mut().zip(f.values.iter().zip(&g.values)) {
            *m = a * x + b * y;
        }
        let (df, dg, dm) = (frac_material_deriv(&f, alpha).unwrap(), frac_material_deriv(&g, alpha).unwrap(), frac_material_deriv(&mix, alpha).unwrap());
        for i in 0..dm.values.len() {
            let lin = a * df.values[i] + b * dg.values[i];
            prop_assert!((dm.values[i] - lin).abs() <= 1e-9 * (1.0 + lin.abs()));
        }
    }
}
