//! Construction of the warped-product profile by shooting.
//!
//! With `x = r - r0` the drivers are
//!
//! ```text
//! q_f: 1+t on [0, xc], ramp to 1-t on [xc, xc+w], 1-t up to xf,
//!      ramp to 1 on [xf, xf+w], then 1
//! q_g: 1+t on [0, xg], ramp to 1 on [xg, xg+w], then 1
//! ```
//!
//! where the ramps are C-infinity smooth steps of width `w`. The release
//! points `xf`, `xg` are shot so that the logarithmic derivatives `f'/f`
//! and `g'/g` are exactly 1 when the driver reaches 1; from there on
//! `h' = q - h^2` keeps them at 1 and the metric is hyperbolic. The core
//! length `xc` is shot so that `f(0) = l1`.
//!
//! A constraint every such profile obeys: `(f'^2 - f^2)' = 2 f f' (q - 1)`
//! runs from `4π^2` at the core to 0 at the hyperbolic end, so
//! `q_f >= 1 - t` forces `l1 >= 2π / sqrt(t)`. Pinching `t` below
//! `(2π / l1)^2` is therefore infeasible.

use std::f64::consts::TAU;

use serde::Serialize;

use super::MetricProfile;
use crate::error::{Error, Result};
use crate::numeric::{brent, rk4, smooth_step, State};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOptions {
    /// Uniform samples on `[r0, 0]`.
    pub samples: usize,
    /// Width of each smooth driver transition.
    pub ramp_width: f64,
    /// RK4 steps per transition width.
    pub ramp_steps: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self { samples: 10_001, ramp_width: 0.05, ramp_steps: 1024 }
    }
}

impl GridOptions {
    fn validate(&self) -> Result<()> {
        if self.samples < 5 {
            return Err(Error::InvalidArgument("grid needs at least 5 samples".into()));
        }
        if !(self.ramp_width > 0.0 && self.ramp_width <= 0.25) {
            return Err(Error::InvalidArgument("ramp width must lie in (0, 0.25]".into()));
        }
        if self.ramp_steps < 16 {
            return Err(Error::InvalidArgument("need at least 16 steps per ramp".into()));
        }
        Ok(())
    }

    fn max_step(&self) -> f64 {
        self.ramp_width / self.ramp_steps as f64
    }
}

/// Resolved shape parameters of a built profile (in `x = r - r0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Construction {
    pub l1: f64,
    pub l2: f64,
    pub t: f64,
    pub core_length: f64,
    pub meridian_release: f64,
    pub longitude_release: f64,
    pub ramp_width: f64,
    /// Distance from the core to the boundary, `-r0`.
    pub radius: f64,
}

#[derive(Debug, Clone, Copy)]
enum Driver {
    Constant(f64),
    Ramp { from: f64, to: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    start: f64,
    end: f64,
    driver: Driver,
}

impl Piece {
    fn q(&self, x: f64) -> f64 {
        match self.driver {
            Driver::Constant(q) => q,
            Driver::Ramp { from, to } => from + (to - from) * smooth_step((x - self.start) / (self.end - self.start)),
        }
    }
}

/// Driver profile for one of the two warping functions, as consecutive
/// pieces; the last piece extends to infinity.
#[derive(Debug, Clone)]
struct Drive {
    pieces: Vec<Piece>,
}

impl Drive {
    fn meridian(t: f64, xc: f64, xf: f64, w: f64) -> Self {
        let mut pieces = Vec::with_capacity(5);
        if xc > 0.0 {
            pieces.push(Piece { start: 0.0, end: xc, driver: Driver::Constant(1.0 + t) });
        }
        pieces.push(Piece { start: xc, end: xc + w, driver: Driver::Ramp { from: 1.0 + t, to: 1.0 - t } });
        if xf > xc + w {
            pieces.push(Piece { start: xc + w, end: xf, driver: Driver::Constant(1.0 - t) });
        }
        pieces.push(Piece { start: xf, end: xf + w, driver: Driver::Ramp { from: 1.0 - t, to: 1.0 } });
        pieces.push(Piece { start: xf + w, end: f64::INFINITY, driver: Driver::Constant(1.0) });
        Self { pieces }
    }

    fn longitude(t: f64, xg: f64, w: f64) -> Self {
        let mut pieces = Vec::with_capacity(3);
        if xg > 0.0 {
            pieces.push(Piece { start: 0.0, end: xg, driver: Driver::Constant(1.0 + t) });
        }
        pieces.push(Piece { start: xg, end: xg + w, driver: Driver::Ramp { from: 1.0 + t, to: 1.0 } });
        pieces.push(Piece { start: xg + w, end: f64::INFINITY, driver: Driver::Constant(1.0) });
        Self { pieces }
    }

    /// Marches `init` at `x = 0` through the sorted sample points, returning
    /// `(y, y', q)` at each. Constant pieces use closed forms from the piece
    /// entry; transitions use RK4 with steps of at most `max_step`.
    fn sample(&self, init: State, xs: &[f64], max_step: f64) -> Vec<(State, f64)> {
        let mut out = Vec::with_capacity(xs.len());
        let mut idx = 0;
        let mut entry = (0.0, init);
        let mut cur = (0.0, init);
        for &x in xs {
            while x > self.pieces[idx].end {
                let piece = self.pieces[idx];
                let end_state = advance(&piece, entry, cur, piece.end, max_step);
                idx += 1;
                entry = (piece.end, end_state);
                cur = entry;
            }
            let piece = self.pieces[idx];
            let s = advance(&piece, entry, cur, x, max_step);
            cur = (x, s);
            out.push((s, piece.q(x)));
        }
        out
    }
}

fn advance(piece: &Piece, entry: (f64, State), cur: (f64, State), x: f64, max_step: f64) -> State {
    match piece.driver {
        Driver::Constant(q) => entry.1.advance_constant(q, x - entry.0),
        Driver::Ramp { .. } => rk4(&|s| piece.q(s), cur.0, cur.1, x, max_step),
    }
}

fn ramp_fn(from: f64, to: f64, start: f64, w: f64) -> impl Fn(f64) -> f64 {
    move |x| from + (to - from) * smooth_step((x - start) / w)
}

/// Release point `xg` of the longitude driver and the state at `xg + w`.
fn longitude_release(t: f64, opts: &GridOptions) -> Result<(f64, State)> {
    let k = (1.0 + t).sqrt();
    let w = opts.ramp_width;
    let at = |xg: f64| {
        let s = State { y: (k * xg).cosh(), dy: k * (k * xg).sinh() };
        rk4(&ramp_fn(1.0 + t, 1.0, xg, w), xg, s, xg + w, opts.max_step())
    };
    let hi = (1.0 / k).atanh() / k;
    let xg = brent(|xg| at(xg).log_derivative() - 1.0, 0.0, hi, 1e-15, 200)
        .map_err(|e| Error::Infeasible(format!("longitude release for t = {t}: {e}")))?;
    Ok((xg, at(xg)))
}

struct MeridianShot {
    core_length: f64,
    release: f64,
    end: State,
}

/// Given the core length, finds the meridian release point.
fn meridian_release(t: f64, xc: f64, opts: &GridOptions) -> Result<MeridianShot> {
    let k2 = 1.0 + t;
    let m2 = 1.0 - t;
    let w = opts.ramp_width;
    let core = State { y: 0.0, dy: TAU }.advance_constant(k2, xc);
    let after_drop = rk4(&ramp_fn(k2, m2, xc, w), xc, core, xc + w, opts.max_step());
    let a = xc + w;
    let h0 = after_drop.log_derivative();
    if h0.is_nan() || h0 <= 1.0 {
        return Err(Error::Infeasible(format!("f'/f = {h0} <= 1 after the first transition (t = {t})")));
    }
    let m = m2.sqrt();
    let hi = a + ((m).atanh() - (m / h0).atanh()) / m;
    let at = |xf: f64| {
        let s = after_drop.advance_constant(m2, xf - a);
        rk4(&ramp_fn(m2, 1.0, xf, w), xf, s, xf + w, opts.max_step())
    };
    let xf = brent(|xf| at(xf).log_derivative() - 1.0, a, hi, 1e-15, 200)
        .map_err(|e| Error::Infeasible(format!("meridian release for t = {t}, core {xc}: {e}")))?;
    Ok(MeridianShot { core_length: xc, release: xf, end: at(xf) })
}

/// Meridian length `f(0)` produced by core length `xc`, with the outer
/// boundary placed where both drivers have reached 1.
fn meridian_length(t: f64, xc: f64, xg: f64, opts: &GridOptions) -> Result<(f64, MeridianShot)> {
    let shot = meridian_release(t, xc, opts)?;
    let w = opts.ramp_width;
    let outer = shot.release.max(xg) + w;
    let len = shot.end.advance_constant(1.0, outer - (shot.release + w)).y;
    Ok((len, shot))
}

/// Smallest meridian length reachable at pinching `t` (zero core length).
pub fn minimal_meridian(t: f64, opts: &GridOptions) -> Result<f64> {
    check_t(t)?;
    opts.validate()?;
    let (xg, _) = longitude_release(t, opts)?;
    Ok(meridian_length(t, 0.0, xg, opts)?.0)
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("target pinching t = {t} must lie in (0, 1)")))
    }
}

/// Builds the profile with meridian `l1`, longitude `l2` and driver range
/// `[1 - t, 1 + t]`.
pub fn build_profile(l1: f64, l2: f64, t: f64, opts: &GridOptions) -> Result<MetricProfile> {
    if !(l1.is_finite() && l1 > TAU) {
        return Err(Error::InvalidArgument(format!("meridian length {l1} must exceed 2π")));
    }
    if !(l2.is_finite() && l2 > 0.0) {
        return Err(Error::InvalidArgument(format!("longitude length {l2} must be positive")));
    }
    check_t(t)?;
    opts.validate()?;

    let (xg, _) = longitude_release(t, opts)?;
    let shortest = meridian_length(t, 0.0, xg, opts)?.0;
    if shortest > l1 {
        return Err(Error::Infeasible(format!("pinching t = {t} needs meridian length >= {shortest:.9}, got {l1}")));
    }
    let mut hi = 0.25;
    loop {
        if meridian_length(t, hi, xg, opts)?.0 >= l1 {
            break;
        }
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::Infeasible("could not bracket the core length".into()));
        }
    }
    let xc = if shortest == l1 {
        0.0
    } else {
        brent(|xc| meridian_length(t, xc, xg, opts).map(|(len, _)| len - l1).unwrap_or(f64::NAN), 0.0, hi, 1e-15, 200)
            .map_err(|e| Error::Infeasible(format!("core-length shooting failed: {e}")))?
    };
    let (_, shot) = meridian_length(t, xc, xg, opts)?;
    debug_assert_eq!(shot.core_length, xc);
    sample(l1, l2, t, shot, xg, opts)
}

fn sample(l1: f64, l2: f64, t: f64, shot: MeridianShot, xg: f64, opts: &GridOptions) -> Result<MetricProfile> {
    let w = opts.ramp_width;
    let radius = shot.release.max(xg) + w;
    let n = opts.samples;
    // Radii first, then x = r - r0: the subtraction is exact on the inner
    // half, so finite differences near the core see consistent nodes.
    let mut r: Vec<f64> = (0..n).map(|i| -radius * ((n - 1 - i) as f64 / (n - 1) as f64)).collect();
    r[n - 1] = 0.0;
    let xs: Vec<f64> = r.iter().map(|r| r + radius).collect();

    let fdrive = Drive::meridian(t, shot.core_length, shot.release, w);
    let gdrive = Drive::longitude(t, xg, w);
    let fs = fdrive.sample(State { y: 0.0, dy: TAU }, &xs, opts.max_step());
    let gs = gdrive.sample(State { y: 1.0, dy: 0.0 }, &xs, opts.max_step());

    let residual = (fs[n - 1].0.y - l1).abs() / l1;
    if residual > tolerance::SHOOTING {
        return Err(Error::Numerical(format!("shooting residual {residual:.3e} exceeds tolerance")));
    }
    // Longitude normalisation; curvatures and volume ratio do not depend on it.
    let scale = l2 / gs[n - 1].0.y;

    let f: Vec<f64> = fs.iter().map(|(s, _)| s.y).collect();
    let df: Vec<f64> = fs.iter().map(|(s, _)| s.dy).collect();
    let d2f: Vec<f64> = fs.iter().map(|(s, q)| q * s.y).collect();
    let g: Vec<f64> = gs.iter().map(|(s, _)| scale * s.y).collect();
    let dg: Vec<f64> = gs.iter().map(|(s, _)| scale * s.dy).collect();
    let d2g: Vec<f64> = gs.iter().map(|(s, q)| q * scale * s.y).collect();

    Ok(MetricProfile {
        r,
        f,
        df,
        d2f,
        g,
        dg,
        d2g,
        cone_core: true,
        construction: Some(Construction {
            l1,
            l2,
            t,
            core_length: shot.core_length,
            meridian_release: shot.release,
            longitude_release: xg,
            ramp_width: w,
            radius,
        }),
    })
}
