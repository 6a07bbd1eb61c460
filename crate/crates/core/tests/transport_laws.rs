use num_complex::Complex64;
use semiflight_core::special_fn::{beta_reg_cdf, ml_survival, TalbotConfig};
use semiflight_core::stats::{ks_distance, Moments};
use semiflight_core::stream;
use semiflight_core::transport::{
    charfn_m_by_inversion, empirical_charfn, psi_symbol, sample_flight, sample_limit,
    sample_scaled_flight, CharFnAccumulator,
};

#[test]
fn psi_three_dimensional_closed_form() {
    // Uniform v on S²: v·ξ/|ξ| is uniform on [-1, 1].
    let i = Complex64::new(0.0, 1.0);
    for &alpha in &[0.3, 0.7] {
        for &(lre, lim) in &[(1.0, 0.0), (0.5, 2.0), (2.0, -1.0)] {
            let lam = Complex64::new(lre, lim);
            let k = 1.7;
            let exact = ((lam + i * k).powf(alpha + 1.0) - (lam - i * k).powf(alpha + 1.0))
                / (2.0 * i * k * (alpha + 1.0));
            let got = psi_symbol(3, alpha, &[0.0, k, 0.0], lam).unwrap();
            assert!((got - exact).norm() < 1e-11, "{got} vs {exact}");
        }
    }
}

#[test]
fn psi_two_dimensional_circle_average() {
    // Periodic trapezoid rule on the circle.
    let (alpha, lam, xi) = (0.6, Complex64::new(0.8, 0.3), [0.9, -1.2]);
    let n = 4096;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let dot = xi[0] * phi.cos() + xi[1] * phi.sin();
        sum += (lam - Complex64::new(0.0, dot)).powf(alpha);
    }
    let oracle = sum / n as f64;
    assert!((psi_symbol(2, alpha, &xi, lam).unwrap() - oracle).norm() < 1e-11);
}

#[test]
fn psi_one_dimensional_is_even_in_xi() {
    let lam = Complex64::new(1.1, 0.4);
    let a = psi_symbol(1, 0.6, &[2.0], lam).unwrap();
    let b = psi_symbol(1, 0.6, &[-2.0], lam).unwrap();
    assert!((a - b).norm() < 1e-15);
}

#[test]
fn no_scattering_mass() {
    let mut rng = stream(31, 0);
    let (alpha, theta) = (0.6, 1.0);
    for &t in &[0.5, 1.0, 2.0] {
        let n = 40_000;
        let mut hits = Moments::new();
        for _ in 0..n {
            let f = sample_flight(2, alpha, theta, t, &[1.0, -1.0], &mut rng).unwrap();
            assert!(f.within_light_cone());
            hits.push(f64::from(u8::from(f.n_jumps == 0)));
        }
        let exact = ml_survival(alpha, theta, t).unwrap();
        assert!(hits.estimate().within(exact, 4.0), "t={t}");
    }
}

#[test]
fn unit_scale_reproduces_the_flight() {
    let mut a = stream(31, 1);
    let mut b = stream(31, 1);
    for _ in 0..100 {
        let x = sample_scaled_flight(3, 0.7, 1.0, 2.0, 1.0, &mut a).unwrap();
        let y = sample_flight(3, 0.7, 1.0, 2.0, &[0.0; 3], &mut b).unwrap();
        assert_eq!(x.position, y.position);
        assert_eq!(x.n_jumps, y.n_jumps);
    }
}

#[test]
fn limit_age_and_its_second_moment() {
    let mut rng = stream(31, 2);
    let (alpha, t) = (0.6, 1.5);
    let mut ages = Vec::new();
    let mut sq = Moments::new();
    for _ in 0..30_000 {
        let s = sample_limit(2, alpha, t, 1e-4 * t, &mut rng).unwrap();
        assert!(s.within_light_cone());
        ages.push(s.gamma_sigma / t);
        sq.push((s.gamma_sigma / t).powi(2));
    }
    let ks = ks_distance(&mut ages, |w| beta_reg_cdf(1.0 - alpha, alpha, w).unwrap());
    assert!(ks < 0.015, "ks={ks}");
    assert!(sq
        .estimate()
        .within((1.0 - alpha) * (2.0 - alpha) / 2.0, 4.0));
}

#[test]
fn charfn_of_m_matches_fourier_laplace_symbol() {
    let mut rng = stream(31, 3);
    let (alpha, t, xi) = (0.7, 1.0, [1.0]);
    let mut acc = CharFnAccumulator::default();
    for _ in 0..20_000 {
        acc.push(&xi, &sample_limit(1, alpha, t, 1e-4, &mut rng).unwrap().m);
    }
    let est = acc.finish(&xi, t).unwrap();
    let exact = charfn_m_by_inversion(1, alpha, &xi, t, TalbotConfig::default()).unwrap();
    assert!(
        (est.estimate.re - exact).abs() < 4.0 * est.stderr_re + 0.005,
        "{est:?} vs {exact}"
    );
    assert!(est.estimate.im.abs() < 4.0 * est.stderr_im);
    let direct = empirical_charfn(&[vec![0.0]], &xi, t).unwrap();
    assert_eq!(direct.estimate, Complex64::new(1.0, 0.0));
}
