//! Process-wide numerical tolerances.
//!
//! Defaults are 1e-9 (relative) for lattice geometry and threshold
//! comparisons and 1e-6 for ODE-level checks (cone angle, hyperbolic end).
//! The CLI may install overrides from `CUSPGAUGE_TOL` once at startup; the
//! library reads whatever is installed, or the defaults.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "CUSPGAUGE_TOL";

pub const DEFAULT_GEOMETRY: f64 = 1e-9;
pub const DEFAULT_ODE: f64 = 1e-6;

/// Stored-derivative vs finite-difference curvature agreement (relative).
pub const CURVATURE_AGREEMENT: f64 = 1e-5;

/// Relative tolerance on the shooting residual f(0) - l1.
pub const SHOOTING: f64 = 1e-8;

/// Lower bounds are shaved by this relative amount before being reported.
pub const ROUND_DOWN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub geometry: f64,
    pub ode: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { geometry: DEFAULT_GEOMETRY, ode: DEFAULT_ODE }
    }
}

impl Tolerances {
    /// Parses either a bare number (geometry tolerance) or a comma separated
    /// list of `geometry=<x>` / `ode=<x>` pairs.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut tol = Tolerances::default();
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(tol);
        }
        if let Ok(v) = spec.parse::<f64>() {
            tol.geometry = check_positive(v, spec)?;
            return Ok(tol);
        }
        for item in spec.split(',') {
            let (key, value) =
                item.split_once('=').ok_or_else(|| Error::InvalidArgument(format!("bad tolerance entry `{item}`")))?;
            let v: f64 =
                value.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad tolerance value `{value}`")))?;
            let v = check_positive(v, item)?;
            match key.trim() {
                "geometry" | "geom" => tol.geometry = v,
                "ode" => tol.ode = v,
                other => return Err(Error::InvalidArgument(format!("unknown tolerance key `{other}`"))),
            }
        }
        Ok(tol)
    }
}

fn check_positive(v: f64, src: &str) -> Result<f64> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!("tolerance `{src}` must lie in (0, 1)")))
    }
}

static INSTALLED: OnceLock<Tolerances> = OnceLock::new();

/// Installs process-wide tolerances. Must happen before any concurrent use;
/// fails if tolerances were already installed.
pub fn install(tol: Tolerances) -> Result<()> {
    INSTALLED.set(tol).map_err(|_| Error::InvalidArgument("tolerances already installed".into()))
}

pub fn current() -> Tolerances {
    INSTALLED.get().copied().unwrap_or_default()
}

pub(crate) fn geometry() -> f64 {
    current().geometry
}

pub(crate) fn ode() -> f64 {
    current().ode
}

/// `a <= b` up to a relative tolerance scaled by `max(1, |a|, |b|)`.
pub(crate) fn approx_le(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * 1f64.max(a.abs()).max(b.abs())
}

pub(crate) fn round_down(x: f64) -> f64 {
    x - ROUND_DOWN * x.abs()
}
