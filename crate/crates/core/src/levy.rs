//! The α-stable subordinator, its first passage and the coupled
//! displacement/time process.
//!
//! Passage over a level is simulated by keeping jumps larger than a cut-off
//! `eps` (compound Poisson with Pareto sizes) and replacing the jumps below it
//! by their mean, a deterministic drift. Whenever that drift, not a jump,
//! carries the subordinator over the level the sample is flagged as creeping.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{check_domain, Result};
use crate::rng::{exp1, normal, open01, unit_vector_into};
use crate::special_fn::gamma;

/// Law of the time change, identified by its Bernstein function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BernsteinSpec {
    /// `f(λ) = λ^α`, Lévy measure `α s^{-α-1} / Γ(1-α) ds`.
    Stable { alpha: f64 },
    /// `f(λ) = λ`: no time change.
    Markov,
}

impl BernsteinSpec {
    pub fn stable(alpha: f64) -> Result<Self> {
        check_domain(alpha > 0.0 && alpha < 1.0, "stable index alpha", alpha)?;
        Ok(BernsteinSpec::Stable { alpha })
    }

    /// `α = 1` maps to [`BernsteinSpec::Markov`].
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if alpha == 1.0 {
            Ok(BernsteinSpec::Markov)
        } else {
            Self::stable(alpha)
        }
    }

    /// Index of the time change, 1 for the Markov case.
    pub fn alpha(&self) -> f64 {
        match *self {
            BernsteinSpec::Stable { alpha } => alpha,
            BernsteinSpec::Markov => 1.0,
        }
    }

    pub fn laplace_exponent(&self, lambda: f64) -> f64 {
        match *self {
            BernsteinSpec::Stable { alpha } => lambda.powf(alpha),
            BernsteinSpec::Markov => lambda,
        }
    }

    /// Tail `ν̄(s) = ν(s, ∞)`; zero in the Markov case.
    pub fn levy_tail(&self, s: f64) -> f64 {
        match *self {
            BernsteinSpec::Stable { alpha } => s.powf(-alpha) / gamma(1.0 - alpha),
            BernsteinSpec::Markov => 0.0,
        }
    }

    pub fn levy_density(&self, s: f64) -> f64 {
        match *self {
            BernsteinSpec::Stable { alpha } => alpha * s.powf(-alpha - 1.0) / gamma(1.0 - alpha),
            BernsteinSpec::Markov => 0.0,
        }
    }
}

/// One draw of `σ(1)` for the stable subordinator with `E e^{-λσ(1)} = e^{-λ^α}`
/// (Kanter's representation of the Chambers–Mallows–Stuck transform).
#[inline]
pub fn stable_unchecked<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = PI * open01(rng);
    let e = exp1(rng);
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = ((1.0 - alpha) * u).sin() / e;
    a * b.powf((1.0 - alpha) / alpha)
}

pub fn sample_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<f64> {
    check_domain(alpha > 0.0 && alpha < 1.0, "stable index alpha", alpha)?;
    Ok(stable_unchecked(alpha, rng))
}

/// Waiting time with `P(J > t) = E_α(-θ t^α)`.
///
/// The increment of σ over an independent `Exp(θ)` operational time `T` is
/// `T^{1/α} σ(1)` by self-similarity; `α = 1` gives `Exp(θ)` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlWaitingTime {
    alpha: f64,
    theta: f64,
}

impl MlWaitingTime {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        check_domain(
            alpha > 0.0 && alpha <= 1.0,
            "waiting-time index alpha",
            alpha,
        )?;
        check_domain(theta > 0.0 && theta.is_finite(), "rate theta", theta)?;
        Ok(MlWaitingTime { alpha, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        ml_wait_unchecked(self.alpha, self.theta, rng)
    }
}

#[inline]
pub(crate) fn ml_wait_unchecked<R: Rng + ?Sized>(alpha: f64, theta: f64, rng: &mut R) -> f64 {
    let clock = exp1(rng) / theta;
    if alpha == 1.0 {
        clock
    } else {
        clock.powf(1.0 / alpha) * stable_unchecked(alpha, rng)
    }
}

pub fn sample_ml_waiting_time<R: Rng + ?Sized>(alpha: f64, theta: f64, rng: &mut R) -> Result<f64> {
    Ok(MlWaitingTime::new(alpha, theta)?.sample(rng))
}

/// Renewal (potential) density `u(w) = w^{α-1} / Γ(α)` of the stable
/// subordinator; identically 1 when `α = 1`.
pub fn renewal_density(alpha: f64, w: f64) -> Result<f64> {
    check_domain(alpha > 0.0 && alpha <= 1.0, "index alpha", alpha)?;
    check_domain(w > 0.0, "renewal argument w", w)?;
    if alpha == 1.0 {
        return Ok(1.0);
    }
    Ok(w.powf(alpha - 1.0) / gamma(alpha))
}

/// First-passage data of σ over the level `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassageSample {
    pub level: f64,
    /// `L(t) = inf{s : σ(s) > t}`.
    pub passage_time: f64,
    /// `σ(L-)`.
    pub undershoot: f64,
    /// `σ(L)`.
    pub overshoot: f64,
    /// The small-jump drift, not a jump, crossed the level; then
    /// `undershoot = overshoot = level`.
    pub creeping: bool,
}

/// Jump-truncation parameters for a stable subordinator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub alpha: f64,
    pub eps: f64,
    /// `ν̄(eps)`: rate of retained jumps per unit operational time.
    pub jump_rate: f64,
    /// `∫_0^eps s ν(ds)`: drift standing in for the discarded jumps.
    pub drift: f64,
    /// `∫_0^eps s² ν(ds)`.
    pub small_jump_second_moment: f64,
}

impl Truncation {
    pub fn new(alpha: f64, eps: f64) -> Result<Self> {
        check_domain(alpha > 0.0 && alpha < 1.0, "stable index alpha", alpha)?;
        check_domain(eps > 0.0, "truncation eps", eps)?;
        let g = gamma(1.0 - alpha);
        Ok(Truncation {
            alpha,
            eps,
            jump_rate: eps.powf(-alpha) / g,
            drift: alpha * eps.powf(1.0 - alpha) / ((1.0 - alpha) * g),
            small_jump_second_moment: alpha * eps.powf(2.0 - alpha) / ((2.0 - alpha) * g),
        })
    }

    /// Default cut-off relative to the level.
    pub fn for_level(alpha: f64, t: f64) -> Result<Self> {
        Self::new(alpha, DEFAULT_EPS_FRACTION * t)
    }

    /// Pareto jump on `(eps, ∞)` with density ∝ `s^{-α-1}`.
    #[inline]
    pub fn jump<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.eps * open01(rng).powf(-1.0 / self.alpha)
    }

    #[inline]
    pub fn inter_arrival<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        exp1(rng) / self.jump_rate
    }
}

/// Default `eps / t`.
pub const DEFAULT_EPS_FRACTION: f64 = 1e-4;

pub fn sample_passage<R: Rng + ?Sized>(
    spec: BernsteinSpec,
    t: f64,
    eps: f64,
    rng: &mut R,
) -> Result<PassageSample> {
    check_domain(t > 0.0, "passage level t", t)?;
    let alpha = match spec {
        BernsteinSpec::Markov => {
            return Ok(PassageSample {
                level: t,
                passage_time: t,
                undershoot: t,
                overshoot: t,
                creeping: true,
            })
        }
        BernsteinSpec::Stable { alpha } => alpha,
    };
    check_domain(eps < t, "truncation eps (must be below the level)", eps)?;
    let tr = Truncation::new(alpha, eps)?;
    let mut sigma = 0.0;
    let mut clock = 0.0;
    loop {
        let dt = tr.inter_arrival(rng);
        let drifted = sigma + tr.drift * dt;
        if drifted > t {
            clock += (t - sigma) / tr.drift;
            return Ok(PassageSample {
                level: t,
                passage_time: clock,
                undershoot: t,
                overshoot: t,
                creeping: true,
            });
        }
        sigma = drifted;
        clock += dt;
        let after = sigma + tr.jump(rng);
        if after > t {
            return Ok(PassageSample {
                level: t,
                passage_time: clock,
                undershoot: sigma,
                overshoot: after,
                creeping: false,
            });
        }
        sigma = after;
    }
}

/// Passage data together with the coupled displacement `A(L-)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPassageSample {
    pub passage: PassageSample,
    /// `A(L-)`: sum of displacements strictly before passage.
    pub a_minus: Vec<f64>,
    /// Direction of the jump that crosses the level; an independent uniform
    /// draw for creeping samples.
    pub passage_direction: Vec<f64>,
    /// `(size, direction)` of every retained jump before passage, when requested.
    pub jump_log: Option<Vec<(f64, Vec<f64>)>>,
}

impl CoupledPassageSample {
    pub fn dimension(&self) -> usize {
        self.a_minus.len()
    }
}

/// Options for [`sample_coupled_passage`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledOptions {
    /// Replace the discarded small-jump displacement by a centred Gaussian.
    pub gaussian_correction: bool,
    pub record_jumps: bool,
}

impl Default for CoupledOptions {
    fn default() -> Self {
        CoupledOptions {
            gaussian_correction: true,
            record_jumps: false,
        }
    }
}

struct CoupledWalker {
    tr: Truncation,
    /// Per-coordinate standard deviation of the small-jump displacement per
    /// unit operational time.
    noise_scale: f64,
    a: Vec<f64>,
    dir: Vec<f64>,
    noise: Vec<f64>,
}

impl CoupledWalker {
    fn new(tr: Truncation, d: usize, gaussian_correction: bool) -> Self {
        let noise_scale = if gaussian_correction {
            (tr.small_jump_second_moment / d as f64).sqrt()
        } else {
            0.0
        };
        CoupledWalker {
            tr,
            noise_scale,
            a: vec![0.0; d],
            dir: vec![0.0; d],
            noise: vec![0.0; d],
        }
    }

    /// Adds the small-jump displacement over `dt` of operational time. Its norm
    /// is capped at the matching σ increment so the pathwise bound
    /// `‖A‖ ≤ σ` survives the Gaussian surrogate.
    fn small_jumps<R: Rng + ?Sized>(&mut self, dt: f64, rng: &mut R) {
        if self.noise_scale == 0.0 {
            return;
        }
        let sd = self.noise_scale * dt.sqrt();
        let mut norm2 = 0.0;
        for g in self.noise.iter_mut() {
            *g = sd * normal(rng);
            norm2 += *g * *g;
        }
        let cap = self.tr.drift * dt;
        let scale = if norm2 > cap * cap {
            cap / norm2.sqrt()
        } else {
            1.0
        };
        for (a, g) in self.a.iter_mut().zip(&self.noise) {
            *a += scale * g;
        }
    }
}

/// First passage of σ over `t` with the coupled displacement process
/// `A(s) = Σ_{r ≤ s} (jump size) · (uniform direction)`.
pub fn sample_coupled_passage<R: Rng + ?Sized>(
    alpha: f64,
    d: usize,
    t: f64,
    eps: f64,
    opts: CoupledOptions,
    rng: &mut R,
) -> Result<CoupledPassageSample> {
    check_domain(d >= 1, "dimension d", d as f64)?;
    check_domain(t > 0.0, "passage level t", t)?;
    check_domain(eps < t, "truncation eps (must be below the level)", eps)?;
    let tr = Truncation::new(alpha, eps)?;
    let mut w = CoupledWalker::new(tr, d, opts.gaussian_correction);
    let mut log = opts.record_jumps.then(Vec::new);
    let mut sigma = 0.0;
    let mut clock = 0.0;
    loop {
        let dt = tr.inter_arrival(rng);
        let drifted = sigma + tr.drift * dt;
        if drifted > t {
            let partial = (t - sigma) / tr.drift;
            w.small_jumps(partial, rng);
            unit_vector_into(rng, &mut w.dir);
            return Ok(CoupledPassageSample {
                passage: PassageSample {
                    level: t,
                    passage_time: clock + partial,
                    undershoot: t,
                    overshoot: t,
                    creeping: true,
                },
                a_minus: w.a,
                passage_direction: w.dir,
                jump_log: log,
            });
        }
        w.small_jumps(dt, rng);
        sigma = drifted;
        clock += dt;
        let s = tr.jump(rng);
        unit_vector_into(rng, &mut w.dir);
        if sigma + s > t {
            return Ok(CoupledPassageSample {
                passage: PassageSample {
                    level: t,
                    passage_time: clock,
                    undershoot: sigma,
                    overshoot: sigma + s,
                    creeping: false,
                },
                a_minus: w.a,
                passage_direction: w.dir,
                jump_log: log,
            });
        }
        sigma += s;
        for (a, v) in w.a.iter_mut().zip(&w.dir) {
            *a += s * v;
        }
        if let Some(log) = log.as_mut() {
            log.push((s, w.dir.clone()));
        }
    }
}

/// `(A(s), σ(s))` at a fixed operational time `s`.
pub fn sample_coupled_at<R: Rng + ?Sized>(
    alpha: f64,
    d: usize,
    s: f64,
    eps: f64,
    gaussian_correction: bool,
    rng: &mut R,
) -> Result<(Vec<f64>, f64)> {
    check_domain(d >= 1, "dimension d", d as f64)?;
    check_domain(s >= 0.0, "operational time s", s)?;
    let tr = Truncation::new(alpha, eps)?;
    let mut w = CoupledWalker::new(tr, d, gaussian_correction);
    let mut sigma = 0.0;
    let mut clock = 0.0;
    loop {
        let dt = tr.inter_arrival(rng);
        if clock + dt > s {
            let rest = s - clock;
            w.small_jumps(rest, rng);
            sigma += tr.drift * rest;
            return Ok((w.a, sigma));
        }
        w.small_jumps(dt, rng);
        clock += dt;
        let jump = tr.jump(rng);
        unit_vector_into(rng, &mut w.dir);
        sigma += tr.drift * dt + jump;
        for (a, v) in w.a.iter_mut().zip(&w.dir) {
            *a += jump * v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn renewal_density_values() {
        assert_eq!(renewal_density(1.0, 17.0).unwrap(), 1.0);
        let expected = 1.0 / (2.0 * PI.sqrt());
        assert!((renewal_density(0.5, 4.0).unwrap() - expected).abs() < 1e-15);
        assert!(renewal_density(0.5, 0.0).is_err());
    }

    #[test]
    fn truncation_constants() {
        let tr = Truncation::new(0.5, 1e-4).unwrap();
        let g = gamma(0.5);
        assert!((tr.jump_rate - 100.0 / g).abs() < 1e-10);
        assert!((tr.drift - 1e-2 / g).abs() < 1e-15);
    }

    #[test]
    fn passage_rejects_large_eps() {
        let mut rng = stream(1, 0);
        assert!(sample_passage(BernsteinSpec::Stable { alpha: 0.5 }, 1.0, 1.0, &mut rng).is_err());
        assert!(
            sample_coupled_passage(0.5, 2, 1.0, 2.0, CoupledOptions::default(), &mut rng).is_err()
        );
    }

    #[test]
    fn markov_passage_is_deterministic() {
        let mut rng = stream(1, 0);
        let p = sample_passage(BernsteinSpec::Markov, 3.0, 1e-4, &mut rng).unwrap();
        assert_eq!(p.passage_time, 3.0);
    }

    #[test]
    fn passage_ordering() {
        let mut rng = stream(2, 0);
        let spec = BernsteinSpec::stable(0.6).unwrap();
        for _ in 0..2000 {
            let p = sample_passage(spec, 2.0, 2e-4, &mut rng).unwrap();
            assert!(p.passage_time > 0.0);
            if !p.creeping {
                assert!(p.undershoot < p.level && p.level < p.overshoot);
            }
        }
    }

    #[test]
    fn coupled_bound_holds_pathwise() {
        let mut rng = stream(3, 0);
        for gaussian_correction in [false, true] {
            let opts = CoupledOptions {
                gaussian_correction,
                record_jumps: true,
            };
            for _ in 0..500 {
                let s = sample_coupled_passage(0.7, 3, 1.0, 1e-3, opts, &mut rng).unwrap();
                let norm = s.a_minus.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!(norm <= s.passage.undershoot * (1.0 + 1e-12));
                let logged: f64 = s.jump_log.as_ref().unwrap().iter().map(|j| j.0).sum();
                assert!(logged <= s.passage.undershoot * (1.0 + 1e-12));
            }
        }
    }
}
