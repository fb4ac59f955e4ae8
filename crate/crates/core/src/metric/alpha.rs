//! Best certified pinching constant as a function of the meridian length.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use super::construct::{build_profile, minimal_meridian, GridOptions};
use super::verify::{pinch_certificate, PinchCertificate};
use crate::error::{Error, ErrorClass, Result};
use crate::io::fmt_sig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaOptions {
    /// Grid for the final certified build.
    pub grid: GridOptions,
    /// Sample count used while searching over `t`.
    pub search_samples: usize,
    pub t_max: f64,
    /// Evenly spaced `t` values probed before the golden-section refinement.
    pub scan_points: usize,
    pub t_tol: f64,
}

impl Default for AlphaOptions {
    fn default() -> Self {
        Self { grid: GridOptions::default(), search_samples: 4001, t_max: 0.99, scan_points: 8, t_tol: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub l1: f64,
    /// Pinching parameter at which the best certificate was found.
    pub t: f64,
    pub alpha: f64,
    pub certificate: PinchCertificate,
}

/// Smallest `t` for which a profile with meridian `l1` exists.
pub fn min_feasible_pinching(l1: f64, opts: &AlphaOptions) -> Result<f64> {
    if !l1.is_finite() {
        return Err(Error::InvalidArgument(format!("meridian length {l1} is not finite")));
    }
    if l1 <= TAU {
        return Err(Error::Infeasible(format!("meridian length {l1} must exceed 2π")));
    }
    let mut hi = opts.t_max;
    if minimal_meridian(hi, &opts.grid)? > l1 {
        return Err(Error::Infeasible(format!("no pinching up to t = {hi} reaches meridian length {l1}")));
    }
    // l1 >= 2π/sqrt(t) is necessary, so everything below is infeasible.
    let mut lo = (TAU / l1).powi(2);
    if lo >= hi {
        return Err(Error::Infeasible(format!("meridian length {l1} too close to 2π")));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if minimal_meridian(mid, &opts.grid)? <= l1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Maximises the certificate value over the pinching parameter.
pub fn alpha_estimate(l1: f64, opts: &AlphaOptions) -> Result<AlphaEstimate> {
    let t_min = min_feasible_pinching(l1, opts)?;
    let search = GridOptions { samples: opts.search_samples, ..opts.grid };
    let score = |t: f64| -> f64 {
        build_profile(l1, 1.0, t, &search)
            .and_then(|p| pinch_certificate(&p))
            .map(|c| if c.valid { c.a } else { f64::NEG_INFINITY })
            .unwrap_or(f64::NEG_INFINITY)
    };

    let n = opts.scan_points.max(3);
    let ts: Vec<f64> = (0..n).map(|i| t_min + (opts.t_max - t_min) * i as f64 / (n - 1) as f64).collect();
    let scores: Vec<f64> = ts.iter().map(|&t| score(t)).collect();
    let best = (0..n).fold(0, |b, i| if scores[i] > scores[b] { i } else { b });
    let (mut best_t, mut best_a) = (ts[best], scores[best]);

    let (mut a, mut b) = (ts[best.saturating_sub(1)], ts[(best + 1).min(n - 1)]);
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut fc, mut fd) = (score(c), score(d));
    while b - a > opts.t_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = score(d);
        }
        for (t, s) in [(c, fc), (d, fd)] {
            if s > best_a {
                best_t = t;
                best_a = s;
            }
        }
    }
    if best_a == f64::NEG_INFINITY {
        return Err(Error::NoCertificate(format!("no certified profile for meridian length {l1}")));
    }

    let profile = build_profile(l1, 1.0, best_t, &opts.grid)?;
    let certificate = pinch_certificate(&profile)?;
    if !certificate.valid {
        return Err(Error::NoCertificate(format!("certificate value {} outside (0, 1)", certificate.a)));
    }
    Ok(AlphaEstimate { l1, t: best_t, alpha: certificate.a, certificate })
}

/// One row of an α sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaRow {
    pub l1: f64,
    pub outcome: std::result::Result<AlphaEstimate, Error>,
}

impl AlphaRow {
    pub fn status(&self) -> &'static str {
        match &self.outcome {
            Ok(_) => "certified",
            Err(e) => match e.class() {
                ErrorClass::Infeasible => "infeasible",
                ErrorClass::InvalidInput => "invalid-input",
                ErrorClass::Numerical => "numerical-failure",
            },
        }
    }
}

/// Evaluates [`alpha_estimate`] at each grid point, in parallel. Rows come
/// back in grid order and do not depend on scheduling.
pub fn alpha_curve(grid: &[f64], opts: &AlphaOptions) -> Vec<AlphaRow> {
    grid.par_iter().map(|&l1| AlphaRow { l1, outcome: alpha_estimate(l1, opts) }).collect()
}

/// `l1,t_star,alpha,kappa_inf,kappa_sup,volume_ratio,status`; failed rows
/// leave the numeric columns empty.
pub fn alpha_curve_csv(rows: &[AlphaRow]) -> String {
    let mut out = String::from("l1,t_star,alpha,kappa_inf,kappa_sup,volume_ratio,status\n");
    for row in rows {
        let cols = match &row.outcome {
            Ok(e) => [e.t, e.alpha, e.certificate.kappa_inf, e.certificate.kappa_sup, e.certificate.volume_ratio]
                .map(fmt_sig)
                .join(","),
            Err(_) => ",,,,".to_string(),
        };
        out.push_str(&format!("{},{},{}\n", fmt_sig(row.l1), cols, row.status()));
    }
    out
}
