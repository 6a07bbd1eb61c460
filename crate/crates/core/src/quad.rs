//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Works for any value type that behaves like a vector over `f64`, so the same
//! driver integrates real and complex integrands.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-13,
            rel: 1e-12,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<V> {
    pub value: V,
    pub error: f64,
}

fn gk15<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * w;
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let k = kronrod * half;
    let g = gauss * half;
    (k, (k - g).magnitude())
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest
/// error estimate until the total estimate meets `tol`.
pub fn integrate<V, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if a == b {
        return Ok(QuadResult {
            value: V::zero(),
            error: 0.0,
        });
    }
    let (v0, e0) = gk15(&mut f, a, b);
    let mut pieces: Vec<(f64, f64, V, f64)> = alloc::vec![(a, b, v0, e0)];
    let mut total = v0;
    let mut total_err = e0;
    loop {
        let target = tol.abs.max(tol.rel * total.magnitude());
        if total_err <= target {
            let value = pieces.iter().fold(V::zero(), |acc, p| acc + p.2);
            return Ok(QuadResult {
                value,
                error: total_err,
            });
        }
        if pieces.len() >= tol.max_intervals {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                discrepancy: total_err,
            });
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                if p.3 > acc.1 {
                    (i, p.3)
                } else {
                    acc
                }
            });
        let (lo, hi, v, e) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            // Interval exhausted at machine resolution; accept what we have.
            return Ok(QuadResult {
                value: total,
                error: total_err,
            });
        }
        let (vl, el) = gk15(&mut f, lo, mid);
        let (vr, er) = gk15(&mut f, mid, hi);
        total = total - v + vl + vr;
        total_err = total_err - e + el + er;
        pieces.push((lo, mid, vl, el));
        pieces.push((mid, hi, vr, er));
        // Re-sum occasionally to stop cancellation drift in the running error.
        if pieces.len().is_multiple_of(64) {
            total_err = pieces.iter().map(|p| p.3).sum();
        }
    }
}

/// Integrates over consecutive breakpoints, e.g. `[a, p1, p2, b]`.
pub fn integrate_pieces<V, F>(mut f: F, points: &[f64], tol: Tolerance) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    let mut value = V::zero();
    let mut error = 0.0;
    for w in points.windows(2) {
        let r = integrate(&mut f, w[0], w[1], tol)?;
        value = value + r.value;
        error += r.error;
    }
    Ok(QuadResult { value, error })
}

/// Integrates over `[a, ∞)` through the map `x = a + (1 - u) / u`.
pub fn integrate_to_infinity<V, F>(mut f: F, a: f64, tol: Tolerance) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    integrate(
        |u: f64| {
            let x = a + (1.0 - u) / u;
            f(x) * (1.0 / (u * u))
        },
        0.0,
        1.0,
        tol,
    )
}
