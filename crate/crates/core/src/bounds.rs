//! Volume and Gromov-norm bounds carried through a Dehn filling.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::CuspLattice;
use crate::metric::{alpha_estimate, AlphaOptions};
use crate::numeric::KahanSum;
use crate::tolerance;

/// Terms of the Lobachevsky series below this size are dropped.
const SERIES_CUTOFF: f64 = 1e-14;

/// Lobachevsky function `Λ(θ) = ½ Σ sin(2nθ)/n²`, summed until the term
/// bound `1/(2n²)` drops below 1e-14. The oscillating tail is `O(1/N²)`.
pub fn lobachevsky(theta: f64) -> f64 {
    let terms = (1.0 / (2.0 * SERIES_CUTOFF)).sqrt().ceil() as u64;
    let mut acc = KahanSum::default();
    for n in 1..=terms {
        let n = n as f64;
        acc.add((2.0 * n * theta).sin() / (n * n));
    }
    0.5 * acc.total()
}

static V3: OnceLock<f64> = OnceLock::new();

/// Volume of the regular ideal tetrahedron, `3 Λ(π/3)`. Computed once.
pub fn ideal_simplex_volume() -> f64 {
    *V3.get_or_init(|| 3.0 * lobachevsky(PI / 3.0))
}

/// `β(α) = α^(-5/2) π / (2 v3)`.
pub fn beta_from_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("α = {alpha} must lie in (0, 1]")));
    }
    Ok(alpha.powf(-2.5) * PI / (2.0 * ideal_simplex_volume()))
}

/// Volume of the cusp above a horospherical cross-section: half its area.
pub fn cusp_volume(lattice: &CuspLattice) -> f64 {
    lattice.area() / 2.0
}

/// Where the pinching constant used for propagation comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSource {
    Supplied(f64),
    Estimate(AlphaOptions),
}

impl AlphaSource {
    fn resolve(&self, l: f64) -> Result<(f64, String)> {
        match *self {
            AlphaSource::Supplied(a) => {
                if !(a > 0.0 && a <= 1.0) {
                    return Err(Error::InvalidArgument(format!("supplied α = {a} must lie in (0, 1]")));
                }
                Ok((a, "supplied".into()))
            }
            AlphaSource::Estimate(opts) => {
                let est = alpha_estimate(l, &opts)?;
                Ok((est.alpha, format!("estimated at l = {l} with t = {:.6}", est.t)))
            }
        }
    }
}

fn check_length(l: f64) -> Result<()> {
    if !l.is_finite() {
        return Err(Error::InvalidArgument(format!("slope length {l} is not finite")));
    }
    if l <= 2.0 * PI {
        return Err(Error::HypothesisNotMet(format!("slope length {l} does not exceed 2π")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub alpha: f64,
    pub alpha_source: String,
    pub length: f64,
    pub volume_unfilled: f64,
    /// Rounded down; the filled volume is strictly larger.
    pub volume_lower_bound: f64,
    /// Sectional curvatures of the filled metric lie in `[-1/α, -α]`.
    pub curvature_interval: [f64; 2],
}

/// Lower volume bound and curvature window for a filling whose slopes all
/// have length at least `l`.
pub fn propagate_filling_bounds(vol_x: f64, l: f64, source: &AlphaSource) -> Result<BoundReport> {
    if !(vol_x.is_finite() && vol_x > 0.0) {
        return Err(Error::InvalidArgument(format!("volume {vol_x} must be positive")));
    }
    check_length(l)?;
    let (alpha, alpha_source) = source.resolve(l)?;
    Ok(BoundReport {
        alpha,
        alpha_source,
        length: l,
        volume_unfilled: vol_x,
        volume_lower_bound: tolerance::round_down(alpha * vol_x),
        curvature_interval: [-1.0 / alpha, -alpha],
    })
}

/// Half-open interval `[lo, hi)` for the Gromov norm of the unfilled manifold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GromovInterval {
    pub lo: f64,
    pub hi: f64,
    pub alpha: f64,
    pub alpha_source: String,
    pub beta: f64,
    pub warning: Option<String>,
}

impl GromovInterval {
    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// `[n, n β)` from the norm `n` of the filled manifold.
pub fn gromov_interval(norm_filled: f64, l: f64, source: &AlphaSource) -> Result<GromovInterval> {
    if !(norm_filled.is_finite() && norm_filled >= 0.0) {
        return Err(Error::InvalidArgument(format!("Gromov norm {norm_filled} must be non-negative")));
    }
    check_length(l)?;
    let (alpha, alpha_source) = source.resolve(l)?;
    let beta = beta_from_alpha(alpha)?;
    let warning = (norm_filled == 0.0).then(|| "zero norm: the interval is degenerate".to_string());
    Ok(GromovInterval { lo: norm_filled, hi: norm_filled * beta, alpha, alpha_source, beta, warning })
}

/// `2 (-κ_sup)^(3/2) vol / π`, a lower bound for the Gromov norm of a
/// manifold with curvature at most `κ_sup < 0`.
pub fn norm_volume_lower_bound(vol: f64, kappa_sup: f64) -> Result<f64> {
    if !(vol.is_finite() && vol > 0.0) {
        return Err(Error::InvalidArgument(format!("volume {vol} must be positive")));
    }
    if !(kappa_sup.is_finite() && kappa_sup < 0.0) {
        return Err(Error::InvalidArgument(format!("κ_sup = {kappa_sup} must be negative")));
    }
    Ok(2.0 * (-kappa_sup).powf(1.5) * vol / PI)
}

/// Gromov norm of a hyperbolic manifold of the given volume.
pub fn hyperbolic_norm(vol: f64) -> Result<f64> {
    if !(vol.is_finite() && vol > 0.0) {
        return Err(Error::InvalidArgument(format!("volume {vol} must be positive")));
    }
    Ok(vol / ideal_simplex_volume())
}

/// Curvature after scaling the metric by `λ`: `κ / λ²`.
pub fn curvature_scaling(kappa: f64, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("scale λ = {lambda} must be positive")));
    }
    Ok(kappa / (lambda * lambda))
}

/// Volume and optional Gromov norm of a hyperbolic manifold, checked
/// against `vol = v3 |X|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicDatum {
    volume: f64,
    gromov_norm: Option<f64>,
}

/// Relative tolerance of the `vol = v3 |X|` gate.
pub const NORM_GATE: f64 = 1e-6;

impl HyperbolicDatum {
    pub fn new(volume: f64, gromov_norm: Option<f64>) -> Result<Self> {
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::InvalidArgument(format!("volume {volume} must be positive")));
        }
        if let Some(n) = gromov_norm {
            if !(n.is_finite() && n > 0.0) {
                return Err(Error::InvalidArgument(format!("Gromov norm {n} must be positive")));
            }
            let expected = ideal_simplex_volume() * n;
            let rel = (volume - expected).abs() / volume;
            if rel > NORM_GATE {
                return Err(Error::InvalidArgument(format!(
                    "volume {volume} disagrees with v3 x norm = {expected} (relative {rel:.3e})"
                )));
            }
        }
        Ok(Self { volume, gromov_norm })
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn gromov_norm(&self) -> Option<f64> {
        self.gromov_norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EuclideanVector;

    #[test]
    fn series_values() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!(lobachevsky(PI / 2.0).abs() < 1e-12);
        assert!((ideal_simplex_volume() - 1.0149416064096536).abs() < 1e-13);
    }

    #[test]
    fn beta_values() {
        assert!((beta_from_alpha(1.0).unwrap() - 1.5476716265003398).abs() < 1e-12);
        assert!((beta_from_alpha(0.5).unwrap() - 8.754952817187231).abs() < 1e-11);
        assert!(beta_from_alpha(0.0).is_err());
        assert!(beta_from_alpha(1.5).is_err());
    }

    #[test]
    fn cusp_volumes() {
        let sq = CuspLattice::new(EuclideanVector::new(1.0, 0.0), EuclideanVector::new(0.0, 1.0), false).unwrap();
        assert_eq!(cusp_volume(&sq), 0.5);
        let l = CuspLattice::new(EuclideanVector::new(2.0, 0.0), EuclideanVector::new(1.0, 2.0), false).unwrap();
        assert_eq!(cusp_volume(&l), 2.0);
    }

    #[test]
    fn propagation() {
        let r = propagate_filling_bounds(2.03, 7.0, &AlphaSource::Supplied(0.6)).unwrap();
        assert!((r.volume_lower_bound - 1.218).abs() < 1e-9);
        assert!(r.volume_lower_bound < 0.6 * 2.03);
        assert!((r.curvature_interval[0] + 1.0 / 0.6).abs() < 1e-15);
        assert_eq!(r.curvature_interval[1], -0.6);
        assert!(matches!(
            propagate_filling_bounds(2.03, 6.0, &AlphaSource::Supplied(0.6)),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn gromov() {
        let g = gromov_interval(2.0, 7.0, &AlphaSource::Supplied(1.0)).unwrap();
        assert_eq!(g.lo, 2.0);
        assert!((g.hi - 3.0953432530006797).abs() < 1e-12);
        let z = gromov_interval(0.0, 7.0, &AlphaSource::Supplied(1.0)).unwrap();
        assert!(z.is_empty() && z.warning.is_some());
    }

    #[test]
    fn norm_bounds() {
        assert!((norm_volume_lower_bound(PI / 2.0, -1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((norm_volume_lower_bound(1.0, -4.0).unwrap() - 16.0 / PI).abs() < 1e-14);
        assert!(norm_volume_lower_bound(1.0, 0.0).is_err());
        let v3 = ideal_simplex_volume();
        assert!((hyperbolic_norm(v3).unwrap() - 1.0).abs() < 1e-15);
        assert!((curvature_scaling(-0.25, 0.5).unwrap() + 1.0).abs() < 1e-15);
        assert!(curvature_scaling(-1.0, 0.0).is_err());
    }

    #[test]
    fn datum_gate() {
        let v3 = ideal_simplex_volume();
        assert!(HyperbolicDatum::new(2.0 * v3, Some(2.0)).is_ok());
        assert!(HyperbolicDatum::new(2.0 * v3 * (1.0 + 1e-5), Some(2.0)).is_err());
        assert!(HyperbolicDatum::new(1.0, None).is_ok());
    }
}
