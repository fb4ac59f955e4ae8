//! Curvature, volume and pinching checks on sampled profiles.

use serde::Serialize;

use super::MetricProfile;
use crate::error::{Error, Result};
use crate::numeric::{fd_weights, simpson};
use crate::tolerance;

/// Samples skipped next to a cone core, where polar coordinates degenerate.
const CORE_EXCLUSION: usize = 2;

/// Curvatures smaller than this are compared in absolute terms.
const AGREEMENT_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    /// Radii of the reported samples.
    pub r: Vec<f64>,
    pub kappa12: Vec<f64>,
    pub kappa13: Vec<f64>,
    pub kappa23: Vec<f64>,
    pub kappa_inf: f64,
    pub kappa_sup: f64,
    pub excluded_core_samples: usize,
    /// Largest relative gap between stored-derivative and finite-difference curvatures.
    pub max_discrepancy: f64,
}

impl CurvatureReport {
    pub fn all_negative(&self) -> bool {
        self.kappa_sup < 0.0
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(AGREEMENT_FLOOR)
}

/// Sectional curvatures at every sample outside the core, from the stored
/// derivatives, cross-checked against fourth-order five-point central
/// differences. Second derivatives are differenced from the stored first
/// derivatives, and those in turn from the values (through κ23), so the
/// chain ties `f''` to `f` while rounding noise grows only like eps/h.
pub fn curvature_report(profile: &MetricProfile) -> Result<CurvatureReport> {
    let n = profile.len();
    let skip = if profile.has_cone_core() { CORE_EXCLUSION } else { 0 };
    let (r, f, g) = (profile.r(), profile.f(), profile.g());
    let (df, dg, d2f, d2g) = (profile.df(), profile.dg(), profile.d2f(), profile.d2g());

    let m = n - skip;
    let mut rep = CurvatureReport {
        r: r[skip..].to_vec(),
        kappa12: Vec::with_capacity(m),
        kappa13: Vec::with_capacity(m),
        kappa23: Vec::with_capacity(m),
        kappa_inf: f64::INFINITY,
        kappa_sup: f64::NEG_INFINITY,
        excluded_core_samples: skip,
        max_discrepancy: 0.0,
    };
    for i in skip..n {
        let k12 = -d2f[i] / f[i];
        let k13 = -d2g[i] / g[i];
        let k23 = -df[i] * dg[i] / (f[i] * g[i]);

        let j0 = i.saturating_sub(2).min(n - 5);
        let w = &fd_weights(r[i], &r[j0..j0 + 5], 1)[1];
        let diff = |col: &[f64]| (0..5).map(|j| w[j] * col[j0 + j]).sum::<f64>();
        let fd12 = -diff(df) / f[i];
        let fd13 = -diff(dg) / g[i];
        let fd23 = -diff(f) * diff(g) / (f[i] * g[i]);

        let gap = rel_gap(k12, fd12).max(rel_gap(k13, fd13)).max(rel_gap(k23, fd23));
        if !gap.is_finite() || gap > tolerance::CURVATURE_AGREEMENT {
            return Err(Error::Numerical(format!(
                "curvature cross-check failed at r = {}: relative gap {gap:.3e}",
                r[i]
            )));
        }
        rep.max_discrepancy = rep.max_discrepancy.max(gap);
        for k in [k12, k13, k23] {
            rep.kappa_inf = rep.kappa_inf.min(k);
            rep.kappa_sup = rep.kappa_sup.max(k);
        }
        rep.kappa12.push(k12);
        rep.kappa13.push(k13);
        rep.kappa23.push(k23);
    }
    Ok(rep)
}

/// Volume of the solid torus with unit `(μ, λ)` periods: the integral of `f g`.
pub fn profile_volume(profile: &MetricProfile) -> f64 {
    let fg: Vec<f64> = profile.f().iter().zip(profile.g()).map(|(f, g)| f * g).collect();
    simpson(profile.r(), &fg)
}

/// `2 Vol(V) / Vol(∂V)`.
pub fn volume_ratio(profile: &MetricProfile) -> f64 {
    2.0 * profile_volume(profile) / (profile.outer_meridian() * profile.outer_longitude())
}

/// Extends an exactly hyperbolic outer end by a collar of width `c`.
pub fn attach_collar(profile: &MetricProfile, c: f64) -> Result<MetricProfile> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidArgument(format!("collar width {c} must be positive")));
    }
    let n = profile.len();
    let (f_end, g_end) = (profile.outer_meridian(), profile.outer_longitude());
    let hf = profile.df()[n - 1] / f_end;
    let hg = profile.dg()[n - 1] / g_end;
    let tol = tolerance::ode();
    if (hf - 1.0).abs() > tol || (hg - 1.0).abs() > tol {
        return Err(Error::Precondition(format!("outer end is not hyperbolic: f'/f = {hf}, g'/g = {hg}")));
    }
    let r_end = profile.outer_radius();
    let spacing = r_end - profile.r()[n - 2];
    let mut m = (c / spacing).ceil().max(2.0) as usize;
    m += m % 2;

    let mut out = profile.clone();
    for j in 1..=m {
        let x = if j == m { c } else { c * j as f64 / m as f64 };
        let e = x.exp();
        out.r.push(r_end + x);
        for (col, v) in [(&mut out.f, f_end * e), (&mut out.g, g_end * e)] {
            col.push(v);
        }
        out.df.push(f_end * e);
        out.d2f.push(f_end * e);
        out.dg.push(g_end * e);
        out.d2g.push(g_end * e);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinchCertificate {
    pub a: f64,
    pub valid: bool,
    pub kappa_inf: f64,
    pub kappa_sup: f64,
    pub volume_ratio: f64,
    /// `-1/a <= κ_inf` and `κ_sup <= -a`.
    pub curvature_bounds_ok: bool,
    pub volume_ratio_ok: bool,
    pub outer_meridian: f64,
    /// `max |κ + 1|` over the reported samples.
    pub measured_pinching: f64,
    pub target_pinching: Option<f64>,
    pub max_discrepancy: f64,
}

/// `a = min(-κ_sup, -1/κ_inf, 2 Vol / Vol ∂)`, valid when it lies in (0, 1).
pub fn pinch_certificate(profile: &MetricProfile) -> Result<PinchCertificate> {
    let rep = curvature_report(profile)?;
    if rep.kappa_sup >= 0.0 {
        return Err(Error::NoCertificate(format!("sectional curvature reaches {} >= 0", rep.kappa_sup)));
    }
    let ratio = volume_ratio(profile);
    let a = (-rep.kappa_sup).min(-1.0 / rep.kappa_inf).min(ratio);
    Ok(PinchCertificate {
        a,
        valid: a > 0.0 && a < 1.0,
        kappa_inf: rep.kappa_inf,
        kappa_sup: rep.kappa_sup,
        volume_ratio: ratio,
        curvature_bounds_ok: -1.0 / a <= rep.kappa_inf && rep.kappa_sup <= -a,
        volume_ratio_ok: ratio >= a,
        outer_meridian: profile.outer_meridian(),
        measured_pinching: (rep.kappa_inf + 1.0).abs().max((rep.kappa_sup + 1.0).abs()),
        target_pinching: profile.construction().map(|c| c.t),
        max_discrepancy: rep.max_discrepancy,
    })
}
