//! Deterministic reference solutions used by the law checks.

/// Solution of `q_tt + 2θ q_t = q_xx` with `q(·, 0) = u`, `q_t(·, 0) = 0`,
/// evaluated at `(x, t)` by the centred explicit scheme on a grid of step
/// `dx` (and `dt = dx / 2`). The grid extends one cell per time step beyond
/// `x` on each side, so the boundary lies outside the discrete domain of
/// dependence of the returned value.
pub fn telegraph_fd(theta: f64, u: impl Fn(f64) -> f64, x: f64, t: f64, dx: f64) -> f64 {
    let dt = 0.5 * dx;
    let steps = (t / dt).round().max(1.0) as usize;
    let dt = t / steps as f64;
    let cells = steps + 2;
    let n = 2 * cells + 1;
    let origin = x - cells as f64 * dx;
    let r = (dt / dx).powi(2);

    let prev: Vec<f64> = (0..n).map(|j| u(origin + j as f64 * dx)).collect();
    let lap = |q: &[f64], j: usize| q[j - 1] - 2.0 * q[j] + q[j + 1];
    // Taylor start: q_tt(0) = q_xx(0) since q_t(0) = 0.
    let mut cur = prev.clone();
    for j in 1..n - 1 {
        cur[j] = prev[j] + 0.5 * r * lap(&prev, j);
    }
    let mut prev = prev;
    let mut next = vec![0.0; n];
    let damp = theta * dt;
    for _ in 1..steps {
        for j in 1..n - 1 {
            next[j] = (2.0 * cur[j] - (1.0 - damp) * prev[j] + r * lap(&cur, j)) / (1.0 + damp);
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    cur[cells]
}

/// The finite-difference value at `dx` and its Richardson error estimate
/// `|q(dx) - q(dx/2)|`; the finer value is returned.
pub fn telegraph_fd_with_error(
    theta: f64,
    u: impl Fn(f64) -> f64 + Copy,
    x: f64,
    t: f64,
    dx: f64,
) -> (f64, f64) {
    let coarse = telegraph_fd(theta, u, x, t, dx);
    let fine = telegraph_fd(theta, u, x, t, 0.5 * dx);
    (fine, (fine - coarse).abs())
}
