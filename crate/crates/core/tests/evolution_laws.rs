use proptest::prelude::*;
use semiflight_core::evolution::{estimate_q, evolve_point, GroupAction};
use semiflight_core::levy::BernsteinSpec;
use semiflight_core::semi_markov::{occupation, simulate_path, FiniteChain, SphereChain};
use semiflight_core::special_fn::{gamma, ml_eval};
use semiflight_core::stats::Moments;
use semiflight_core::stream;

/// RK4 solve of the moment system of the Markov telegraph started at x = 0,
/// V(0) = +1: returns E X(t)².
fn telegraph_second_moment(theta: f64, t: f64) -> f64 {
    // state: [p+, p-, a+, a-, b+, b-] with a = E X 1{V}, b = E X² 1{V}.
    let rhs = |y: &[f64; 6]| -> [f64; 6] {
        [
            theta * (y[1] - y[0]),
            theta * (y[0] - y[1]),
            y[0] + theta * (y[3] - y[2]),
            -y[1] + theta * (y[2] - y[3]),
            2.0 * y[2] + theta * (y[5] - y[4]),
            -2.0 * y[3] + theta * (y[4] - y[5]),
        ]
    };
    let n = 4000;
    let h = t / n as f64;
    let mut y = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let axpy = |y: &[f64; 6], k: &[f64; 6], c: f64| -> [f64; 6] {
        std::array::from_fn(|i| y[i] + c * k[i])
    };
    for _ in 0..n {
        let k1 = rhs(&y);
        let k2 = rhs(&axpy(&y, &k1, h / 2.0));
        let k3 = rhs(&axpy(&y, &k2, h / 2.0));
        let k4 = rhs(&axpy(&y, &k3, h));
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    y[4] + y[5]
}

#[test]
fn markov_telegraph_second_moment() {
    let theta = 1.3;
    let chain = FiniteChain::telegraph(theta).unwrap();
    let mut rng = stream(21, 0);
    for &t in &[0.5, 2.0, 5.0] {
        let est = estimate_q(
            GroupAction::Translate { d: 1 },
            &chain,
            BernsteinSpec::Markov,
            |_: &mut _| 0usize,
            t,
            &[0.0],
            |y: &[f64], _: &usize| y[0] * y[0],
            60_000,
            &mut rng,
        )
        .unwrap();
        let oracle = telegraph_second_moment(theta, t);
        assert!(est.within(oracle, 4.0), "t={t}: {est:?} vs {oracle}");
    }
}

#[test]
fn semi_markov_telegraph_state_probability() {
    let theta = 0.8;
    let chain = FiniteChain::telegraph(theta).unwrap();
    let mut rng = stream(21, 1);
    for &alpha in &[0.4, 0.7, 1.0] {
        let spec = BernsteinSpec::from_alpha(alpha).unwrap();
        for &t in &[0.3, 1.0, 4.0] {
            let est = estimate_q(
                GroupAction::Translate { d: 1 },
                &chain,
                spec,
                |_: &mut _| 0usize,
                t,
                &[0.0],
                |_: &[f64], &s: &usize| f64::from(u8::from(s == 0)),
                40_000,
                &mut rng,
            )
            .unwrap();
            let exact = 0.5 * (1.0 + ml_eval(alpha, -2.0 * theta * t.powf(alpha)).unwrap());
            assert!(
                est.within(exact, 4.0),
                "alpha={alpha} t={t}: {est:?} vs {exact}"
            );
        }
    }
}

#[test]
fn renewal_counts_match_mean_function() {
    let chain = FiniteChain::telegraph(1.7).unwrap();
    let mut rng = stream(21, 2);
    for &alpha in &[0.5, 0.8] {
        let spec = BernsteinSpec::stable(alpha).unwrap();
        let t = 3.0;
        let m: Moments = (0..40_000)
            .map(|_| {
                simulate_path(&chain, spec, 0, t, &mut rng)
                    .unwrap()
                    .jump_count() as f64
            })
            .collect();
        let exact = 1.7 * t.powf(alpha) / gamma(1.0 + alpha);
        assert!(m.estimate().within(exact, 4.0), "alpha={alpha}");
    }
}

#[test]
fn one_dimensional_flight_is_an_occupation_difference() {
    let chain = FiniteChain::new(
        vec![vec![1.0], vec![-1.0]],
        vec![vec![0.5, 0.5], vec![0.5, 0.5]],
        vec![1.0, 1.0],
    )
    .unwrap();
    let spec = BernsteinSpec::stable(0.6).unwrap();
    let mut rng = stream(21, 3);
    for _ in 0..500 {
        let path = simulate_path(&chain, spec, 0, 5.0, &mut rng).unwrap();
        for &t in &[0.7, 2.0, 5.0] {
            let y = evolve_point(GroupAction::Translate { d: 1 }, &chain, &path, t, &[0.25])
                .unwrap()
                .y[0];
            let occ = occupation(&path, 2, t).unwrap();
            assert!((y - 0.25 - (occ.per_state[0] - occ.per_state[1])).abs() < 1e-12);
            assert!((occ.per_state.iter().sum::<f64>() - t).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn translation_group_law(s1 in -5.0f64..5.0, s2 in -5.0f64..5.0, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let g = GroupAction::Translate { d: 2 };
        let v = [0.6, -0.8];
        let mut a = [x, y];
        g.act(&v, s1, &mut a);
        g.act(&v, s2, &mut a);
        let mut b = [x, y];
        g.act(&v, s1 + s2, &mut b);
        prop_assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    }

    #[test]
    fn rotation_group_law(s1 in -5.0f64..5.0, s2 in -5.0f64..5.0, x in -3.0f64..3.0, y in -3.0f64..3.0, up in any::<bool>()) {
        let g = GroupAction::Rotate2D;
        let v = [if up { 1.0 } else { -1.0 }];
        let mut a = [x, y];
        g.act(&v, s1, &mut a);
        g.act(&v, s2, &mut a);
        let mut b = [x, y];
        g.act(&v, s1 + s2, &mut b);
        prop_assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        prop_assert!(((b[0] * b[0] + b[1] * b[1]) - (x * x + y * y)).abs() < 1e-10);
    }

    #[test]
    fn sphere_flights_have_finite_speed(seed in any::<u64>(), alpha in 0.2f64..=1.0, t in 0.0f64..20.0, d in 1usize..4) {
        let space = SphereChain::new(d, 1.0).unwrap();
        let spec = BernsteinSpec::from_alpha(alpha).unwrap();
        let mut rng = stream(seed, 0);
        let v0 = space.uniform_state(&mut rng);
        let path = simulate_path(&space, spec, v0, t.max(1e-9), &mut rng).unwrap();
        let x = vec![0.5; d];
        let y = evolve_point(GroupAction::Translate { d }, &space, &path, t, &x).unwrap().y;
        let dist = y.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        prop_assert!(dist <= t * (1.0 + 1e-12) + 1e-15);
    }
}
