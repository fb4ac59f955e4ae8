//! Negatively curved metrics on the filling solid torus.
//!
//! The metric is the warped product
//!
//! ```text
//! ds^2 = dr^2 + f(r)^2 dμ^2 + g(r)^2 dλ^2,   r in [r0, 0],
//! ```
//!
//! with a cone point of angle 2π on the core (`f(r0) = 0`, `f'(r0) = 2π`)
//! and an exactly hyperbolic end (`f = l1 e^r`, `g = l2 e^r` near `r = 0`).
//! Its sectional curvatures are `-f''/f`, `-g''/g` and `-f'g'/(fg)`.
//!
//! Profiles are built from the linear equations `f'' = q_f f`,
//! `g'' = q_g g` where the drivers `q` take values in `[1 - t, 1 + t]`; see
//! [`build_profile`].

mod alpha;
mod construct;
mod verify;

pub use alpha::{
    alpha_curve, alpha_curve_csv, alpha_estimate, min_feasible_pinching, AlphaEstimate, AlphaOptions, AlphaRow,
};
pub use construct::{build_profile, minimal_meridian, Construction, GridOptions};
pub use verify::{
    attach_collar, curvature_report, pinch_certificate, profile_volume, volume_ratio, CurvatureReport, PinchCertificate,
};

use serde::Serialize;

use crate::error::{Error, Result};

/// Sampled radial profile of a solid-torus metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricProfile {
    r: Vec<f64>,
    f: Vec<f64>,
    df: Vec<f64>,
    d2f: Vec<f64>,
    g: Vec<f64>,
    dg: Vec<f64>,
    d2g: Vec<f64>,
    cone_core: bool,
    construction: Option<Construction>,
}

/// Column-wise sample arrays for [`MetricProfile::from_samples`].
#[derive(Debug, Clone, Default)]
pub struct ProfileSamples {
    pub r: Vec<f64>,
    pub f: Vec<f64>,
    pub df: Vec<f64>,
    pub d2f: Vec<f64>,
    pub g: Vec<f64>,
    pub dg: Vec<f64>,
    pub d2g: Vec<f64>,
}

impl MetricProfile {
    /// Wraps externally produced samples. With `cone_core` the first sample
    /// is the core axis, where `f` vanishes.
    pub fn from_samples(samples: ProfileSamples, cone_core: bool) -> Result<Self> {
        let ProfileSamples { r, f, df, d2f, g, dg, d2g } = samples;
        let n = r.len();
        if n < 5 {
            return Err(Error::InvalidArgument(format!("profile needs >= 5 samples, got {n}")));
        }
        for (name, col) in [("f", &f), ("f'", &df), ("f''", &d2f), ("g", &g), ("g'", &dg), ("g''", &d2g)] {
            if col.len() != n {
                return Err(Error::InvalidArgument(format!("column {name} has {} samples, expected {n}", col.len())));
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("column {name} has non-finite samples")));
            }
        }
        if r.iter().any(|v| !v.is_finite()) || r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("radial grid must be finite and strictly increasing".into()));
        }
        let first_positive = usize::from(cone_core);
        if f[first_positive..].iter().chain(&g).any(|&v| v <= 0.0) {
            return Err(Error::InvalidArgument("f and g must be positive away from the core".into()));
        }
        Ok(Self { r, f, df, d2f, g, dg, d2g, cone_core, construction: None })
    }

    /// Exactly hyperbolic piece `f = l1 e^r`, `g = l2 e^r` on `[0, c]`.
    pub fn hyperbolic_collar(l1: f64, l2: f64, c: f64, samples: usize) -> Result<Self> {
        if !(l1 > 0.0 && l2 > 0.0 && c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument("collar needs positive l1, l2 and width".into()));
        }
        let n = samples.max(5);
        let r: Vec<f64> = (0..n).map(|i| c * i as f64 / (n - 1) as f64).collect();
        let f: Vec<f64> = r.iter().map(|x| l1 * x.exp()).collect();
        let g: Vec<f64> = r.iter().map(|x| l2 * x.exp()).collect();
        Self::from_samples(
            ProfileSamples { r, df: f.clone(), d2f: f.clone(), f, dg: g.clone(), d2g: g.clone(), g },
            false,
        )
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn df(&self) -> &[f64] {
        &self.df
    }

    pub fn d2f(&self) -> &[f64] {
        &self.d2f
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn dg(&self) -> &[f64] {
        &self.dg
    }

    pub fn d2g(&self) -> &[f64] {
        &self.d2g
    }

    pub fn has_cone_core(&self) -> bool {
        self.cone_core
    }

    /// Parameters of the construction, for profiles made by [`build_profile`].
    pub fn construction(&self) -> Option<&Construction> {
        self.construction.as_ref()
    }

    pub fn r0(&self) -> f64 {
        self.r[0]
    }

    /// `f'(r0)`; equals 2π when the cone angle at the core is 2π.
    pub fn core_gradient(&self) -> f64 {
        self.df[0]
    }

    pub fn outer_radius(&self) -> f64 {
        *self.r.last().expect("non-empty")
    }

    /// Meridian length on the outer boundary torus.
    pub fn outer_meridian(&self) -> f64 {
        *self.f.last().expect("non-empty")
    }

    /// Longitude length on the outer boundary torus.
    pub fn outer_longitude(&self) -> f64 {
        *self.g.last().expect("non-empty")
    }

    /// CSV dump: `r,f,g,df,dg,d2f,d2g`.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("r,f,g,df,dg,d2f,d2g\n");
        for i in 0..self.len() {
            let cols = [self.r[i], self.f[i], self.g[i], self.df[i], self.dg[i], self.d2f[i], self.d2g[i]];
            let line: Vec<String> = cols.iter().map(|v| crate::io::fmt_sig(*v)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}
