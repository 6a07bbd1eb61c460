//! Caputo-type time derivative and the fractional material derivative on
//! uniform grids, plus a quadrature check of their shared symbol.
//!
//! Both operators use the Lévy measure `ν(ds) = α s^{-α-1} ds / Γ(1-α)` and
//! its tail `ν̄(t) = t^{-α} / Γ(1-α)`:
//!
//! ```text
//! D f(t)  = ∫_0^t (f(t) - f(t-s)) ν(ds) + ν̄(t) (f(t) - f(0))
//! Dv h(x,t) = ∫_0^t (h(x,t) - h(x+vs,t-s)) ν(ds) + ν̄(t) (h(x,t) - h(x+vt,0))
//! ```
//!
//! The increment is interpolated linearly between grid nodes and integrated
//! against `s^{-α-1}` in closed form on each cell; on the first cell this is
//! the local linearization. The scheme is exact for increments linear in `s`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_domain, Error, Result};
use crate::quad::{self, Tolerance};
use crate::special_fn::gamma;

#[derive(Debug, Clone, PartialEq)]
pub struct GridFn1D {
    pub dt: f64,
    /// Samples at `t = 0, dt, 2dt, ...`.
    pub values: Vec<f64>,
}

impl GridFn1D {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        check_domain(dt > 0.0 && dt.is_finite(), "time step dt", dt)?;
        check_finite(&values)?;
        Ok(GridFn1D { dt, values })
    }

    pub fn from_fn(dt: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        Self::new(dt, (0..n).map(|k| f(k as f64 * dt)).collect())
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `h(x, t)` on `x = x0 + j dx`, `t = n dt`, stored time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFnST {
    pub x0: f64,
    pub dx: f64,
    pub dt: f64,
    pub nx: usize,
    /// `values[n * nx + j] = h(x0 + j dx, n dt)`.
    pub values: Vec<f64>,
    pub v: f64,
}

impl GridFnST {
    pub fn new(x0: f64, dx: f64, dt: f64, nx: usize, values: Vec<f64>, v: f64) -> Result<Self> {
        check_domain(dx > 0.0 && dx.is_finite(), "space step dx", dx)?;
        check_domain(dt > 0.0 && dt.is_finite(), "time step dt", dt)?;
        check_domain(
            nx >= 2 && values.len().is_multiple_of(nx),
            "grid row length",
            nx as f64,
        )?;
        check_domain(v.is_finite() && x0.is_finite(), "velocity v", v)?;
        check_finite(&values)?;
        Ok(GridFnST {
            x0,
            dx,
            dt,
            nx,
            values,
            v,
        })
    }

    pub fn from_fn(
        x0: f64,
        dx: f64,
        nx: usize,
        dt: f64,
        nt: usize,
        v: f64,
        mut h: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * nt);
        for n in 0..nt {
            for j in 0..nx {
                values.push(h(x0 + j as f64 * dx, n as f64 * dt));
            }
        }
        Self::new(x0, dx, dt, nx, values, v)
    }

    pub fn nt(&self) -> usize {
        self.values.len() / self.nx
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn at(&self, j: usize, n: usize) -> f64 {
        self.values[n * self.nx + j]
    }

    /// Linear interpolation in `x` on time row `n`; zero outside the box.
    pub fn lookup(&self, x: f64, n: usize) -> f64 {
        let r = (x - self.x0) / self.dx;
        let last = (self.nx - 1) as f64;
        if !(0.0..=last).contains(&r) {
            return 0.0;
        }
        let j = (r.floor() as usize).min(self.nx - 2);
        let w = r - j as f64;
        let row = &self.values[n * self.nx..];
        (1.0 - w) * row[j] + w * row[j + 1]
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(&bad) => Err(Error::Domain {
            what: "grid value",
            value: bad,
        }),
        None => Ok(()),
    }
}

/// `(k+1)^p - k^p` without cancellation for large `k`.
fn power_step(k: f64, p: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        k.powf(p) * (p * (1.0 / k).ln_1p()).exp_m1()
    }
}

/// Per-cell weights for `∫_{k dt}^{(k+1) dt} g(s) s^{-α-1} ds` with `g`
/// linear on the cell: the integral is `g_k a[k] + (g_{k+1} - g_k) c[k]`.
/// `a[0]` is unused because `g_0 = 0`.
struct CellWeights {
    a: Vec<f64>,
    c: Vec<f64>,
    scale: f64,
    tail: f64,
    alpha: f64,
    dt: f64,
}

impl CellWeights {
    fn new(alpha: f64, dt: f64, n: usize) -> Self {
        let mut a = vec![0.0; n];
        let mut c = vec![0.0; n];
        for k in 0..n {
            let kf = k as f64;
            let b = power_step(kf, 1.0 - alpha) / (1.0 - alpha);
            if k == 0 {
                c[0] = b / dt.powf(alpha);
            } else {
                let ak = -power_step(kf, -alpha) / alpha;
                a[k] = ak * dt.powf(-alpha);
                c[k] = (b - kf * ak) * dt.powf(-alpha);
            }
        }
        let g1 = gamma(1.0 - alpha);
        CellWeights {
            a,
            c,
            scale: alpha / g1,
            tail: 1.0 / g1,
            alpha,
            dt,
        }
    }

    /// `g(k) = F(t_n) - F` at lag `k`, for `k = 0..=n`.
    fn apply(&self, n: usize, head: f64, last: f64, mut g: impl FnMut(usize) -> f64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        let mut prev = 0.0;
        for k in 0..n {
            let next = g(k + 1);
            sum += prev * self.a[k] + (next - prev) * self.c[k];
            prev = next;
        }
        let t = n as f64 * self.dt;
        self.scale * sum + self.tail * t.powf(-self.alpha) * (head - last)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    check_domain(alpha > 0.0 && alpha < 1.0, "index alpha", alpha)
}

/// Caputo-type derivative of `f` at every grid time; the value at `t = 0`
/// is set to zero.
pub fn caputo_frac_deriv(f: &GridFn1D, alpha: f64) -> Result<GridFn1D> {
    check_alpha(alpha)?;
    let n = f.len();
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    let w = CellWeights::new(alpha, f.dt, n);
    let u = &f.values;
    let values = (0..n)
        .map(|m| w.apply(m, u[m], u[0], |k| u[m] - u[m - k]))
        .collect();
    Ok(GridFn1D { dt: f.dt, values })
}

/// Errors unless `h` vanishes on the edge that characteristics `x + vs` leave
/// through.
fn check_boundary(h: &GridFnST) -> Result<()> {
    if h.v == 0.0 {
        return Ok(());
    }
    let edge = if h.v > 0.0 { h.nx - 1 } else { 0 };
    let scale = h.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let max_abs = (0..h.nt()).fold(0.0f64, |m, n| m.max(h.at(edge, n).abs()));
    if max_abs > 1e-12 * scale.max(1.0) {
        return Err(Error::BoundarySupport { max_abs });
    }
    Ok(())
}

struct MaterialPlan<'a> {
    h: &'a GridFnST,
    weights: CellWeights,
}

impl<'a> MaterialPlan<'a> {
    fn new(h: &'a GridFnST, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let nt = h.nt();
        if nt < 4 {
            return Err(Error::TooFewPoints { needed: 4, got: nt });
        }
        check_boundary(h)?;
        Ok(MaterialPlan {
            h,
            weights: CellWeights::new(alpha, h.dt, nt),
        })
    }

    fn node(&self, j: usize, n: usize) -> f64 {
        let h = self.h;
        let x = h.x(j);
        let here = h.at(j, n);
        let shift = h.v * h.dt;
        let last = h.lookup(x + shift * n as f64, 0);
        self.weights.apply(n, here, last, |k| {
            here - h.lookup(x + shift * k as f64, n - k)
        })
    }
}

/// Fractional material derivative of `h` along velocity `h.v` at every node;
/// the row `t = 0` is set to zero.
pub fn frac_material_deriv(h: &GridFnST, alpha: f64) -> Result<GridFnST> {
    let plan = MaterialPlan::new(h, alpha)?;
    let mut values = Vec::with_capacity(h.values.len());
    for n in 0..h.nt() {
        for j in 0..h.nx {
            values.push(plan.node(j, n));
        }
    }
    Ok(GridFnST {
        values,
        ..h.clone()
    })
}

/// The material derivative at the single node `(j, n)`.
pub fn frac_material_deriv_at(h: &GridFnST, alpha: f64, j: usize, n: usize) -> Result<f64> {
    check_domain(j < h.nx, "node index j", j as f64)?;
    check_domain(n < h.nt(), "node index n", n as f64)?;
    Ok(MaterialPlan::new(h, alpha)?.node(j, n))
}

/// `1 - e^{-w}` accurate for small `|w|`.
fn one_minus_exp(w: Complex64) -> Complex64 {
    if w.norm() < 0.1 {
        let mut term = w;
        let mut sum = w;
        for k in 2..16 {
            term = -term * w / k as f64;
            sum += term;
        }
        sum
    } else {
        Complex64::new(1.0, 0.0) - (-w).exp()
    }
}

/// `|∫_0^∞ (1 - e^{-sz}) ν(ds) - z^α|` with `z = λ + iξv`, by quadrature.
pub fn verify_symbol(alpha: f64, v: f64, xi: f64, lambda: Complex64) -> Result<f64> {
    check_alpha(alpha)?;
    check_domain(lambda.re > 0.0, "Re(lambda)", lambda.re)?;
    let z = lambda + Complex64::new(0.0, xi * v);
    let tol = Tolerance {
        abs: 1e-15,
        rel: 1e-13,
        max_intervals: 20_000,
    };

    // s = r^{1/(1-α)} on [0, 1] removes the endpoint singularity.
    let p = 1.0 / (1.0 - alpha);
    let head = quad::integrate(
        |r: f64| {
            if r == 0.0 {
                return z * p;
            }
            let s = r.powf(p);
            one_minus_exp(z * s) * (p / s)
        },
        0.0,
        1.0,
        tol,
    )?;

    // ∫_1^∞ e^{-sz} s^{-α-1} ds, cut where e^{-s Re z} drops below 1e-20.
    let end = 1.0 + 46.0 / z.re;
    let width = if z.im == 0.0 {
        end
    } else {
        (core::f64::consts::PI / z.im.abs()).max(0.5)
    };
    let pieces = (((end - 1.0) / width).ceil() as usize).clamp(1, 400);
    let points: Vec<f64> = (0..=pieces)
        .map(|i| 1.0 + (end - 1.0) * i as f64 / pieces as f64)
        .collect();
    let tail =
        quad::integrate_pieces(|s: f64| (-z * s).exp() * s.powf(-alpha - 1.0), &points, tol)?;

    let lhs =
        (head.value + Complex64::new(1.0 / alpha, 0.0) - tail.value) * (alpha / gamma(1.0 - alpha));
    Ok((lhs - z.powf(alpha)).norm())
}
