//! The semi-Markov velocity chain `V(t) = W(L(t))`.
//!
//! `W` is a jump chain with exponential holding times of rate `θ_v`; running it
//! on the inverse-subordinator clock keeps its embedded chain and turns each
//! holding time into a Mittag-Leffler variable with the same rate.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{check_domain, Error, Result};
use crate::levy::{ml_wait_unchecked, BernsteinSpec};
use crate::rng::unit_vector_into;

/// State space of the embedded chain together with its holding rates.
pub trait StateSpace {
    type State: Clone;

    /// Holding rate `θ_v` of the untimed-changed chain in `state`.
    fn rate(&self, state: &Self::State) -> f64;

    /// Replaces `state` by a draw from the jump kernel `h_state`.
    fn redraw<R: Rng + ?Sized>(&self, state: &mut Self::State, rng: &mut R);

    fn check_state(&self, state: &Self::State) -> Result<()>;
}

/// Exposes the velocity carried by a state for translation-type evolutions.
pub trait Velocity: StateSpace {
    fn velocity<'a>(&'a self, state: &'a Self::State) -> &'a [f64];
    fn dimension(&self) -> usize;
}

/// Finitely many states, each labelled by a velocity vector, with a
/// row-stochastic jump kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteChain {
    labels: Vec<Vec<f64>>,
    cumulative: Vec<Vec<f64>>,
    rates: Vec<f64>,
}

impl FiniteChain {
    pub fn new(labels: Vec<Vec<f64>>, kernel: Vec<Vec<f64>>, rates: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        check_domain(n >= 1, "number of states", n as f64)?;
        check_domain(kernel.len() == n, "kernel rows", kernel.len() as f64)?;
        check_domain(rates.len() == n, "rate count", rates.len() as f64)?;
        let dim = labels[0].len();
        for l in &labels {
            check_domain(l.len() == dim, "label dimension", l.len() as f64)?;
        }
        for &r in &rates {
            check_domain(r > 0.0 && r.is_finite(), "holding rate", r)?;
        }
        let mut cumulative = Vec::with_capacity(n);
        for row in &kernel {
            check_domain(row.len() == n, "kernel row length", row.len() as f64)?;
            let mut acc = 0.0;
            let mut cum = Vec::with_capacity(n);
            for &p in row {
                check_domain(p >= 0.0, "kernel entry", p)?;
                acc += p;
                cum.push(acc);
            }
            check_domain((acc - 1.0).abs() < 1e-12, "kernel row sum", acc)?;
            cumulative.push(cum);
        }
        Ok(FiniteChain {
            labels,
            cumulative,
            rates,
        })
    }

    /// Two states `{+1, -1}` that always switch, both with rate `θ`.
    pub fn telegraph(theta: f64) -> Result<Self> {
        Self::new(
            vec![vec![1.0], vec![-1.0]],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![theta, theta],
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, state: usize) -> &[f64] {
        &self.labels[state]
    }
}

impl StateSpace for FiniteChain {
    type State = usize;

    fn rate(&self, state: &usize) -> f64 {
        self.rates[*state]
    }

    fn redraw<R: Rng + ?Sized>(&self, state: &mut usize, rng: &mut R) {
        let row = &self.cumulative[*state];
        let u: f64 = rng.random::<f64>() * row[row.len() - 1];
        *state = row.iter().position(|&c| u < c).unwrap_or(row.len() - 1);
    }

    fn check_state(&self, state: &usize) -> Result<()> {
        check_domain(*state < self.len(), "state index", *state as f64)
    }
}

impl Velocity for FiniteChain {
    fn velocity<'a>(&'a self, state: &'a usize) -> &'a [f64] {
        &self.labels[*state]
    }

    fn dimension(&self) -> usize {
        self.labels[0].len()
    }
}

/// Directions on `S^{d-1}`, redrawn independently and uniformly at every
/// epoch, with a common rate `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereChain {
    d: usize,
    theta: f64,
}

impl SphereChain {
    pub fn new(d: usize, theta: f64) -> Result<Self> {
        check_domain(d >= 1, "dimension d", d as f64)?;
        check_domain(theta > 0.0 && theta.is_finite(), "rate theta", theta)?;
        Ok(SphereChain { d, theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn uniform_state<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut v = vec![0.0; self.d];
        unit_vector_into(rng, &mut v);
        v
    }
}

impl StateSpace for SphereChain {
    type State = Vec<f64>;

    fn rate(&self, _state: &Vec<f64>) -> f64 {
        self.theta
    }

    fn redraw<R: Rng + ?Sized>(&self, state: &mut Vec<f64>, rng: &mut R) {
        unit_vector_into(rng, state);
    }

    fn check_state(&self, state: &Vec<f64>) -> Result<()> {
        check_domain(state.len() == self.d, "state dimension", state.len() as f64)?;
        let norm = state.iter().map(|x| x * x).sum::<f64>().sqrt();
        check_domain((norm - 1.0).abs() < 1e-9, "state norm", norm)
    }
}

impl Velocity for SphereChain {
    fn velocity<'a>(&'a self, state: &'a Vec<f64>) -> &'a [f64] {
        state
    }

    fn dimension(&self) -> usize {
        self.d
    }
}

/// Streams the segments `[τ_{n-1}, τ_n)` of a path without storing them.
pub struct SegmentWalker<'s, S: StateSpace> {
    space: &'s S,
    alpha: f64,
    state: S::State,
    start: f64,
    end: f64,
    started: bool,
}

impl<'s, S: StateSpace> SegmentWalker<'s, S> {
    pub fn new(space: &'s S, spec: BernsteinSpec, v0: S::State) -> Result<Self> {
        space.check_state(&v0)?;
        Ok(SegmentWalker {
            space,
            alpha: spec.alpha(),
            state: v0,
            start: 0.0,
            end: 0.0,
            started: false,
        })
    }

    /// Advances to the next segment and returns `(τ_{n-1}, τ_n)`; the state on
    /// it is [`SegmentWalker::state`].
    #[inline]
    pub fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (f64, f64) {
        if self.started {
            self.space.redraw(&mut self.state, rng);
        }
        self.started = true;
        self.start = self.end;
        let rate = self.space.rate(&self.state);
        self.end = self.start + ml_wait_unchecked(self.alpha, rate, rng);
        (self.start, self.end)
    }

    pub fn state(&self) -> &S::State {
        &self.state
    }
}

/// One realisation of `V` on `[0, T]`, including the segment in progress at
/// `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiMarkovPath<St> {
    pub horizon: f64,
    /// `τ_1 < … < τ_N ≤ T`.
    pub epochs: Vec<f64>,
    /// `τ_{N+1} > T`, end of the segment in progress.
    pub next_epoch: f64,
    /// `v_1, …, v_{N+1}`; `v_n` holds on `[τ_{n-1}, τ_n)`.
    pub states: Vec<St>,
}

impl<St> SemiMarkovPath<St> {
    pub fn jump_count(&self) -> usize {
        self.epochs.len()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::OutOfHorizon {
                t,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    /// `N(t) = max{n : τ_n ≤ t}`.
    pub fn count_at(&self, t: f64) -> Result<usize> {
        self.check_time(t)?;
        Ok(self.epochs.partition_point(|&tau| tau <= t))
    }

    pub fn state_at(&self, t: f64) -> Result<&St> {
        let n = self.count_at(t)?;
        Ok(&self.states[n])
    }

    /// `γ(t) = t - τ_{N(t)}`.
    pub fn age(&self, t: f64) -> Result<f64> {
        let n = self.count_at(t)?;
        Ok(if n == 0 { t } else { t - self.epochs[n - 1] })
    }

    /// Segments `(start, end, state)` cut at `t`, in chronological order.
    pub fn segments_until(&self, t: f64) -> Result<impl Iterator<Item = (f64, f64, &St)> + '_> {
        let n = self.count_at(t)?;
        Ok((0..=n).map(move |i| {
            let start = if i == 0 { 0.0 } else { self.epochs[i - 1] };
            let end = if i == n { t } else { self.epochs[i] };
            (start, end, &self.states[i])
        }))
    }

    /// `∫_0^t (-1)^{N(τ)} dτ`.
    pub fn alternating_time(&self, t: f64) -> Result<f64> {
        let mut sum = 0.0;
        for (i, (a, b, _)) in self.segments_until(t)?.enumerate() {
            if i % 2 == 0 {
                sum += b - a;
            } else {
                sum -= b - a;
            }
        }
        Ok(sum)
    }
}

pub fn simulate_path<S: StateSpace, R: Rng + ?Sized>(
    space: &S,
    spec: BernsteinSpec,
    v0: S::State,
    horizon: f64,
    rng: &mut R,
) -> Result<SemiMarkovPath<S::State>> {
    check_domain(horizon > 0.0 && horizon.is_finite(), "horizon T", horizon)?;
    let mut walker = SegmentWalker::new(space, spec, v0)?;
    let mut epochs = Vec::new();
    let mut states = Vec::new();
    loop {
        let (_, end) = walker.advance(rng);
        states.push(walker.state().clone());
        if end > horizon {
            return Ok(SemiMarkovPath {
                horizon,
                epochs,
                next_epoch: end,
                states,
            });
        }
        epochs.push(end);
    }
}

/// Occupation times `H_t^v` and the age at `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationRecord {
    pub t: f64,
    pub per_state: Vec<f64>,
    pub age: f64,
}

pub fn occupation(
    path: &SemiMarkovPath<usize>,
    n_states: usize,
    t: f64,
) -> Result<OccupationRecord> {
    let mut per_state = vec![0.0; n_states];
    for (a, b, &s) in path.segments_until(t)? {
        check_domain(s < n_states, "state index", s as f64)?;
        per_state[s] += b - a;
    }
    Ok(OccupationRecord {
        t,
        per_state,
        age: path.age(t)?,
    })
}
