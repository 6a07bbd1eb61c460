//! Isotropic flights with Mittag-Leffler flight times, their rescaling and the
//! superdiffusive scaling limit.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{check_domain, Error, Result};
use crate::levy::{sample_coupled_passage, BernsteinSpec, CoupledOptions};
use crate::quad::{self, Tolerance};
use crate::semi_markov::{SegmentWalker, SphereChain};
use crate::special_fn::{gamma, talbot_invert, TalbotConfig};
use crate::stats::{loglog_fit, LinearFit, Moments};

/// Relative slack for the finite-speed bound `‖x - x₀‖ ≤ t` that absorbs
/// floating-point rounding.
pub const FINITE_SPEED_RTOL: f64 = 1e-12;

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `X(t) = x₀ + Σ_{i ≤ N(t)} J_i v_i + (t - τ_{N(t)}) v_{N(t)+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlightSample {
    pub t: f64,
    pub origin: Vec<f64>,
    pub position: Vec<f64>,
    /// `Σ J_i v_i` over completed flights, summed in chronological order.
    pub jump_sum: Vec<f64>,
    /// `(t - τ_N) v_{N+1}`.
    pub in_flight: Vec<f64>,
    pub n_jumps: u64,
    /// Age `t - τ_N` of the flight in progress.
    pub gamma: f64,
}

impl FlightSample {
    pub fn displacement(&self) -> Vec<f64> {
        self.position
            .iter()
            .zip(&self.origin)
            .map(|(x, o)| x - o)
            .collect()
    }

    pub fn within_light_cone(&self) -> bool {
        norm(&self.displacement()) <= self.t * (1.0 + FINITE_SPEED_RTOL)
    }
}

pub fn sample_flight<R: Rng + ?Sized>(
    d: usize,
    alpha: f64,
    theta: f64,
    t: f64,
    x0: &[f64],
    rng: &mut R,
) -> Result<FlightSample> {
    check_domain(x0.len() == d, "origin dimension", x0.len() as f64)?;
    check_domain(t >= 0.0 && t.is_finite(), "time t", t)?;
    let space = SphereChain::new(d, theta)?;
    let spec = BernsteinSpec::from_alpha(alpha)?;
    let v0 = space.uniform_state(rng);
    let mut walker = SegmentWalker::new(&space, spec, v0)?;
    let mut jump_sum = vec![0.0; d];
    let mut n_jumps = 0u64;
    loop {
        let (start, end) = walker.advance(rng);
        let v = walker.state();
        if end > t {
            let gamma = t - start;
            let in_flight: Vec<f64> = v.iter().map(|vi| gamma * vi).collect();
            let position = x0
                .iter()
                .zip(&jump_sum)
                .zip(&in_flight)
                .map(|((o, j), f)| (o + j) + f)
                .collect();
            return Ok(FlightSample {
                t,
                origin: x0.to_vec(),
                position,
                jump_sum,
                in_flight,
                n_jumps,
                gamma,
            });
        }
        let flight = end - start;
        for (s, vi) in jump_sum.iter_mut().zip(v) {
            *s += flight * vi;
        }
        n_jumps += 1;
    }
}

/// `X^c(t) = c^{-1/α} X(c^{1/α} t)` from the origin; all components and the
/// age are rescaled, `n_jumps` is the unscaled count.
pub fn sample_scaled_flight<R: Rng + ?Sized>(
    d: usize,
    alpha: f64,
    theta: f64,
    t: f64,
    c: f64,
    rng: &mut R,
) -> Result<FlightSample> {
    check_domain(c >= 1.0 && c.is_finite(), "scale c", c)?;
    let stretch = c.powf(1.0 / alpha);
    let origin = vec![0.0; d];
    let raw = sample_flight(d, alpha, theta, stretch * t, &origin, rng)?;
    let shrink = 1.0 / stretch;
    let scale = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|x| x * shrink).collect() };
    let jump_sum = scale(raw.jump_sum);
    let in_flight = scale(raw.in_flight);
    let position = jump_sum
        .iter()
        .zip(&in_flight)
        .map(|(j, f)| j + f)
        .collect();
    Ok(FlightSample {
        t,
        origin,
        position,
        jump_sum,
        in_flight,
        n_jumps: raw.n_jumps,
        gamma: (raw.gamma * shrink).min(t),
    })
}

/// One draw of `X_∞(t) = M(t) + γ^σ(t) U` with `M(t) = A(L(t)-)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSample {
    pub t: f64,
    pub m: Vec<f64>,
    /// `t - σ(L(t)-)`.
    pub gamma_sigma: f64,
    pub u: Vec<f64>,
    pub x_inf: Vec<f64>,
    /// The underlying passage was completed by the small-jump drift.
    pub creeping: bool,
}

impl LimitSample {
    pub fn within_light_cone(&self) -> bool {
        norm(&self.x_inf) <= self.t * (1.0 + FINITE_SPEED_RTOL)
    }
}

/// Draws `X_∞(t)` from a truncated coupled passage; `U` is the direction of
/// the jump that straddles `t`.
pub fn sample_limit<R: Rng + ?Sized>(
    d: usize,
    alpha: f64,
    t: f64,
    eps: f64,
    rng: &mut R,
) -> Result<LimitSample> {
    let s = sample_coupled_passage(alpha, d, t, eps, CoupledOptions::default(), rng)?;
    let gamma_sigma = (t - s.passage.undershoot).max(0.0);
    let x_inf = s
        .a_minus
        .iter()
        .zip(&s.passage_direction)
        .map(|(m, u)| m + gamma_sigma * u)
        .collect();
    Ok(LimitSample {
        t,
        m: s.a_minus,
        gamma_sigma,
        u: s.passage_direction,
        x_inf,
        creeping: s.passage.creeping,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharFnEstimate {
    pub xi: Vec<f64>,
    pub t: f64,
    pub estimate: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    /// `√(stderr_re² + stderr_im²)`.
    pub stderr: f64,
    pub n: u64,
}

/// Streaming sums for `E e^{iξ·x}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CharFnAccumulator {
    pub re: Moments,
    pub im: Moments,
}

impl CharFnAccumulator {
    #[inline]
    pub fn push(&mut self, xi: &[f64], x: &[f64]) {
        let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
        let (s, c) = phase.sin_cos();
        self.re.push(c);
        self.im.push(s);
    }

    pub fn merge(&mut self, other: &CharFnAccumulator) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn finish(&self, xi: &[f64], t: f64) -> Result<CharFnEstimate> {
        if self.re.count() == 0 {
            return Err(Error::EmptyInput);
        }
        let (sr, si) = (self.re.stderr(), self.im.stderr());
        Ok(CharFnEstimate {
            xi: xi.to_vec(),
            t,
            estimate: Complex64::new(self.re.mean(), self.im.mean()),
            stderr_re: sr,
            stderr_im: si,
            stderr: sr.hypot(si),
            n: self.re.count(),
        })
    }
}

/// Empirical characteristic function `mean e^{iξ·x}` of `samples` taken at
/// time `t`.
pub fn empirical_charfn<V: AsRef<[f64]>>(
    samples: &[V],
    xi: &[f64],
    t: f64,
) -> Result<CharFnEstimate> {
    let mut acc = CharFnAccumulator::default();
    for s in samples {
        let s = s.as_ref();
        check_domain(s.len() == xi.len(), "sample dimension", s.len() as f64)?;
        acc.push(xi, s);
    }
    acc.finish(xi, t)
}

/// `ψ(ξ, λ) = ∫_{S^{d-1}} (λ - iξ·v)^α μ(dv)`, principal branch, `Re λ > 0`.
///
/// For `d ≥ 2` the sphere average reduces to the polar angle φ between ξ and
/// v, with weight `sin^{d-2} φ`.
pub fn psi_symbol(d: usize, alpha: f64, xi: &[f64], lambda: Complex64) -> Result<Complex64> {
    check_domain(lambda.re > 0.0, "Re(lambda)", lambda.re)?;
    psi_symbol_continued(d, alpha, xi, lambda)
}

/// The same principal-branch expression for any `λ` off the cuts
/// `±i|ξ| + (-∞, 0]`, as needed on an inversion contour.
pub fn psi_symbol_continued(
    d: usize,
    alpha: f64,
    xi: &[f64],
    lambda: Complex64,
) -> Result<Complex64> {
    check_domain(d >= 1, "dimension d", d as f64)?;
    check_domain(xi.len() == d, "frequency dimension", xi.len() as f64)?;
    check_domain(alpha > 0.0 && alpha <= 1.0, "index alpha", alpha)?;
    let k = norm(xi);
    if k == 0.0 {
        return Ok(lambda.powf(alpha));
    }
    if alpha == 1.0 {
        return Ok(lambda);
    }
    let i = Complex64::new(0.0, 1.0);
    if d == 1 {
        return Ok(((lambda - i * k).powf(alpha) + (lambda + i * k).powf(alpha)) * 0.5);
    }
    let dm = d as f64;
    let weight_norm = gamma(dm / 2.0) / (core::f64::consts::PI.sqrt() * gamma((dm - 1.0) / 2.0));
    let power = (d - 2) as i32;
    let r = quad::integrate(
        |phi: f64| (lambda - i * (k * phi.cos())).powf(alpha) * phi.sin().powi(power),
        0.0,
        core::f64::consts::PI,
        Tolerance {
            abs: 1e-14,
            rel: 1e-13,
            max_intervals: 2000,
        },
    )?;
    Ok(r.value * weight_norm)
}

/// `E e^{iξ·M(t)}` by numerical inversion of its Laplace transform
/// `λ^{α-1} / ψ(ξ, λ)`.
pub fn charfn_m_by_inversion(
    d: usize,
    alpha: f64,
    xi: &[f64],
    t: f64,
    cfg: TalbotConfig,
) -> Result<f64> {
    psi_symbol_continued(d, alpha, xi, Complex64::new(1.0, 0.0))?;
    let mut failure = None;
    let value = talbot_invert(
        |l| match psi_symbol_continued(d, alpha, xi, l) {
            Ok(psi) => l.powf(alpha - 1.0) / psi,
            Err(e) => {
                failure = Some(e);
                Complex64::new(0.0, 0.0)
            }
        },
        t,
        cfg,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsdPoint {
    pub t: f64,
    pub msd: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MsdCurve {
    pub points: Vec<MsdPoint>,
    /// Fit of `log E‖X(t)‖²` against `log t`.
    pub fit: LinearFit,
}

pub fn msd_from_moments(t_grid: &[f64], moments: &[Moments]) -> MsdCurve {
    let points: Vec<MsdPoint> = t_grid
        .iter()
        .zip(moments)
        .map(|(&t, m)| MsdPoint {
            t,
            msd: m.mean(),
            stderr: m.stderr(),
        })
        .collect();
    let ts: Vec<f64> = points.iter().map(|p| p.t).collect();
    let ms: Vec<f64> = points.iter().map(|p| p.msd).collect();
    MsdCurve {
        fit: loglog_fit(&ts, &ms),
        points,
    }
}

/// Mean squared displacement of `sampler(t, rng)` on an increasing time grid.
pub fn msd_curve<R, F>(
    mut sampler: F,
    t_grid: &[f64],
    n_paths: usize,
    rng: &mut R,
) -> Result<MsdCurve>
where
    R: Rng + ?Sized,
    F: FnMut(f64, &mut R) -> Result<Vec<f64>>,
{
    check_domain(t_grid.len() >= 2, "time grid length", t_grid.len() as f64)?;
    for w in t_grid.windows(2) {
        check_domain(
            w[0] > 0.0 && w[1] > w[0],
            "time grid (must be positive, increasing)",
            w[1],
        )?;
    }
    let mut moments = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut m = Moments::new();
        for _ in 0..n_paths {
            let x = sampler(t, rng)?;
            m.push(x.iter().map(|v| v * v).sum());
        }
        moments.push(m);
    }
    Ok(msd_from_moments(t_grid, &moments))
}
