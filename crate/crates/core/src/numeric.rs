//! Small numerical kernels: smooth transitions, RK4 for `y'' = q(x) y`,
//! bracketed root finding, finite-difference weights and quadrature.

use crate::error::{Error, Result};

/// C-infinity transition from 0 (u <= 0) to 1 (u >= 1).
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / u).exp();
        let b = (-1.0 / (1.0 - u)).exp();
        a / (a + b)
    }
}

/// Value and first derivative of a solution of `y'' = q(x) y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub y: f64,
    pub dy: f64,
}

impl State {
    pub fn log_derivative(self) -> f64 {
        self.dy / self.y
    }

    /// Exact propagation over a distance `s` with constant `q = m^2 > 0`.
    pub fn advance_constant(self, q: f64, s: f64) -> State {
        let m = q.sqrt();
        let (sh, ch) = ((m * s).sinh(), (m * s).cosh());
        State { y: self.y * ch + self.dy / m * sh, dy: self.y * m * sh + self.dy * ch }
    }
}

/// Classical RK4 for `y'' = q(x) y` from `x0` to `x1` using at least
/// `ceil(|x1 - x0| / max_step)` equal steps.
pub fn rk4<Q: Fn(f64) -> f64>(q: &Q, x0: f64, state: State, x1: f64, max_step: f64) -> State {
    let span = x1 - x0;
    if span == 0.0 {
        return state;
    }
    let n = (span.abs() / max_step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let (mut y, mut dy) = (state.y, state.dy);
    for i in 0..n {
        let x = x0 + i as f64 * h;
        let qa = q(x);
        let qm = q(x + 0.5 * h);
        let qb = q(x + h);
        let k1y = dy;
        let k1d = qa * y;
        let k2y = dy + 0.5 * h * k1d;
        let k2d = qm * (y + 0.5 * h * k1y);
        let k3y = dy + 0.5 * h * k2d;
        let k3d = qm * (y + 0.5 * h * k2y);
        let k4y = dy + h * k3d;
        let k4d = qb * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    State { y, dy }
}

/// Brent's method on a bracket with `f(a)` and `f(b)` of opposite sign.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, xtol: f64, max_iter: usize) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Numerical(format!("root not bracketed on [{a}, {b}]: f = ({fa}, {fb})")));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0)), (q0 - 1.0) * (r - 1.0) * (s - 1.0))
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::Numerical("root finder did not converge".into()))
}

/// Finite-difference weights for derivatives 0..=`order` at `z` from the
/// nodes `x` (Fornberg's recursion). Returns `w[k][j]`, the weight of node
/// `j` for derivative `k`.
pub fn fd_weights(z: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Composite Simpson rule on an arbitrary strictly increasing grid.
///
/// Interval pairs use the three-point irregular Simpson formula; an odd
/// trailing interval gets the matching one-interval correction. Exact for
/// quadratics, and for cubics on uniform grids with an even interval count.
pub fn simpson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    assert_eq!(n, y.len());
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
    }
    let intervals = n - 1;
    let mut acc = KahanSum::default();
    let mut i = 0;
    while i + 2 <= intervals {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let hs = h0 + h1;
        acc.add(hs / 6.0 * ((2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]));
        i += 2;
    }
    if intervals % 2 == 1 {
        let h0 = x[n - 2] - x[n - 3];
        let h1 = x[n - 1] - x[n - 2];
        let alpha = (2.0 * h1 * h1 + 3.0 * h1 * h0) / (6.0 * (h0 + h1));
        let beta = (h1 * h1 + 3.0 * h1 * h0) / (6.0 * h0);
        let eta = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        acc.add(alpha * y[n - 1] + beta * y[n - 2] - eta * y[n - 3]);
    }
    acc.total()
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}
