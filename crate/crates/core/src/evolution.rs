//! Random evolutions realised pointwise.
//!
//! A group acting on points, `φ_v(s, ·)`, turns a semi-Markov path into the
//! point map `x ↦ φ_{v_{N+1}}(t - τ_N, … φ_{v_1}(J_1, x))`; the evolution of a
//! scalar test function `u` is then `u` evaluated at that point, and its
//! expectation is a Monte Carlo average.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{check_domain, Result};
use crate::levy::BernsteinSpec;
use crate::semi_markov::{FiniteChain, SegmentWalker, SemiMarkovPath, Velocity};
use crate::stats::{MomentEstimate, Moments};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupAction {
    /// `x ↦ x + v s` in `R^d`.
    Translate { d: usize },
    /// `x ↦ (x₁ cos s + v x₂ sin s, -v x₁ sin s + x₂ cos s)` with `v = ±1`
    /// taken from the first velocity component.
    Rotate2D,
}

impl GroupAction {
    pub fn dimension(&self) -> usize {
        match *self {
            GroupAction::Translate { d } => d,
            GroupAction::Rotate2D => 2,
        }
    }

    /// Applies `φ_v(s, ·)` to `x` in place.
    #[inline]
    pub fn act(&self, v: &[f64], s: f64, x: &mut [f64]) {
        match *self {
            GroupAction::Translate { .. } => {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += vi * s;
                }
            }
            GroupAction::Rotate2D => {
                let (sin, cos) = s.sin_cos();
                let w = v[0];
                let (x1, x2) = (x[0], x[1]);
                x[0] = x1 * cos + w * x2 * sin;
                x[1] = -w * x1 * sin + x2 * cos;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedEvolution<St> {
    pub y: Vec<f64>,
    pub v_end: St,
}

fn check_point(action: GroupAction, x: &[f64]) -> Result<()> {
    check_domain(
        x.len() == action.dimension(),
        "point dimension",
        x.len() as f64,
    )
}

pub fn evolve_point<S: Velocity>(
    action: GroupAction,
    space: &S,
    path: &SemiMarkovPath<S::State>,
    t: f64,
    x: &[f64],
) -> Result<EvaluatedEvolution<S::State>> {
    check_point(action, x)?;
    let mut y = x.to_vec();
    let mut last = None;
    for (a, b, state) in path.segments_until(t)? {
        action.act(space.velocity(state), b - a, &mut y);
        last = Some(state);
    }
    let v_end = last.cloned().unwrap_or_else(|| path.states[0].clone());
    Ok(EvaluatedEvolution { y, v_end })
}

/// Simulates one path up to `t` and applies the evolution to `y` in place;
/// returns the state at `t`.
fn evolve_streaming<S: Velocity, R: Rng + ?Sized>(
    action: GroupAction,
    space: &S,
    spec: BernsteinSpec,
    v0: S::State,
    t: f64,
    y: &mut [f64],
    rng: &mut R,
) -> Result<S::State> {
    let mut walker = SegmentWalker::new(space, spec, v0)?;
    loop {
        let (start, end) = walker.advance(rng);
        let stop = end.min(t);
        action.act(space.velocity(walker.state()), stop - start, y);
        if end > t {
            return Ok(walker.state().clone());
        }
    }
}

/// Sufficient statistics of `u(𝒯(t) x, V(t))` over `n_paths` independent
/// paths started from `init(rng)`.
#[allow(clippy::too_many_arguments)]
pub fn accumulate_q<S, R, I, U>(
    action: GroupAction,
    space: &S,
    spec: BernsteinSpec,
    mut init: I,
    t: f64,
    x: &[f64],
    mut u: U,
    n_paths: usize,
    rng: &mut R,
) -> Result<Moments>
where
    S: Velocity,
    R: Rng + ?Sized,
    I: FnMut(&mut R) -> S::State,
    U: FnMut(&[f64], &S::State) -> f64,
{
    check_point(action, x)?;
    check_domain(t >= 0.0, "time t", t)?;
    let mut stats = Moments::new();
    let mut y = x.to_vec();
    for _ in 0..n_paths {
        y.copy_from_slice(x);
        let v0 = init(rng);
        let v_end = evolve_streaming(action, space, spec, v0, t, &mut y, rng)?;
        stats.push(u(&y, &v_end));
    }
    Ok(stats)
}

/// Monte Carlo estimate of `q(t) = E 𝒯(t) u(V(t))` evaluated at `x`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_q<S, R, I, U>(
    action: GroupAction,
    space: &S,
    spec: BernsteinSpec,
    init: I,
    t: f64,
    x: &[f64],
    u: U,
    n_paths: usize,
    rng: &mut R,
) -> Result<MomentEstimate>
where
    S: Velocity,
    R: Rng + ?Sized,
    I: FnMut(&mut R) -> S::State,
    U: FnMut(&[f64], &S::State) -> f64,
{
    Ok(accumulate_q(action, space, spec, init, t, x, u, n_paths, rng)?.estimate())
}

/// `∫_0^t (-1)^{N(τ)} dτ` for a renewal process with Mittag-Leffler
/// (or exponential) inter-arrival times of rate `θ`.
pub fn sample_alternating_time<R: Rng + ?Sized>(
    chain: &FiniteChain,
    spec: BernsteinSpec,
    t: f64,
    rng: &mut R,
) -> Result<f64> {
    let mut walker = SegmentWalker::new(chain, spec, 0)?;
    let mut sum = 0.0;
    let mut sign = 1.0;
    loop {
        let (start, end) = walker.advance(rng);
        let stop = end.min(t);
        sum += sign * (stop - start);
        if end > t {
            return Ok(sum);
        }
        sign = -sign;
    }
}

/// Sufficient statistics of `½ (w(x + γ_t) + w(x - γ_t))`, where
/// `γ_t = ∫_0^t (-1)^{N(τ)} dτ` and the renewal process switches a two-state
/// telegraph chain with common rate `θ`.
pub fn accumulate_q_wave_repr<R, W>(
    spec: BernsteinSpec,
    theta: f64,
    t: f64,
    x: f64,
    mut w_init: W,
    n_paths: usize,
    rng: &mut R,
) -> Result<Moments>
where
    R: Rng + ?Sized,
    W: FnMut(f64) -> f64,
{
    check_domain(t >= 0.0, "time t", t)?;
    let chain = FiniteChain::telegraph(theta)?;
    let mut stats = Moments::new();
    for _ in 0..n_paths {
        let gamma = if t == 0.0 {
            0.0
        } else {
            sample_alternating_time(&chain, spec, t, rng)?
        };
        stats.push(0.5 * (w_init(x + gamma) + w_init(x - gamma)));
    }
    Ok(stats)
}

pub fn estimate_q_wave_repr<R, W>(
    spec: BernsteinSpec,
    theta: f64,
    t: f64,
    x: f64,
    w_init: W,
    n_paths: usize,
    rng: &mut R,
) -> Result<MomentEstimate>
where
    R: Rng + ?Sized,
    W: FnMut(f64) -> f64,
{
    Ok(accumulate_q_wave_repr(spec, theta, t, x, w_init, n_paths, rng)?.estimate())
}

/// The same expectation computed directly: translate along a telegraph path
/// whose initial velocity is ±1 with probability ½ each.
pub fn accumulate_q_telegraph_direct<R, W>(
    spec: BernsteinSpec,
    theta: f64,
    t: f64,
    x: f64,
    mut w_init: W,
    n_paths: usize,
    rng: &mut R,
) -> Result<Moments>
where
    R: Rng + ?Sized,
    W: FnMut(f64) -> f64,
{
    let chain = FiniteChain::telegraph(theta)?;
    accumulate_q(
        GroupAction::Translate { d: 1 },
        &chain,
        spec,
        |rng: &mut R| usize::from(rng.random::<bool>()),
        t,
        &[x],
        |y: &[f64], _: &usize| w_init(y[0]),
        n_paths,
        rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use alloc::vec;

    #[test]
    fn translate_without_jumps() {
        let chain = FiniteChain::telegraph(1.0).unwrap();
        let path = SemiMarkovPath {
            horizon: 3.0,
            epochs: vec![],
            next_epoch: 4.0,
            states: vec![0usize],
        };
        let e = evolve_point(GroupAction::Translate { d: 1 }, &chain, &path, 3.0, &[0.0]).unwrap();
        assert_eq!(e.y, vec![3.0]);
        assert_eq!(e.v_end, 0);
    }

    #[test]
    fn forward_then_back() {
        let chain = FiniteChain::telegraph(1.0).unwrap();
        let path = SemiMarkovPath {
            horizon: 2.0,
            epochs: vec![1.0],
            next_epoch: 4.0,
            states: vec![0usize, 1],
        };
        let e = evolve_point(GroupAction::Translate { d: 1 }, &chain, &path, 2.0, &[0.0]).unwrap();
        assert_eq!(e.y, vec![0.0]);
        assert_eq!(e.v_end, 1);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let chain = FiniteChain::telegraph(1.0).unwrap();
        let path = SemiMarkovPath {
            horizon: 2.0,
            epochs: vec![],
            next_epoch: 4.0,
            states: vec![0usize],
        };
        assert!(evolve_point(GroupAction::Rotate2D, &chain, &path, 1.0, &[0.0]).is_err());
        assert!(evolve_point(GroupAction::Translate { d: 1 }, &chain, &path, 3.0, &[0.0]).is_err());
    }

    #[test]
    fn constant_test_function() {
        let chain = FiniteChain::telegraph(1.0).unwrap();
        let mut rng = stream(9, 0);
        let est = estimate_q(
            GroupAction::Translate { d: 1 },
            &chain,
            BernsteinSpec::stable(0.6).unwrap(),
            |_: &mut _| 0usize,
            2.0,
            &[0.3],
            |_: &[f64], _: &usize| 1.0,
            500,
            &mut rng,
        )
        .unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn wave_repr_at_time_zero() {
        let mut rng = stream(9, 1);
        let w = |x: f64| (-x * x).exp();
        let est =
            estimate_q_wave_repr(BernsteinSpec::Markov, 1.0, 0.0, 0.4, w, 10, &mut rng).unwrap();
        assert_eq!(est.mean, w(0.4));
    }
}
