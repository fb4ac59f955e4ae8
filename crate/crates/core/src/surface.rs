//! Essential surfaces in filled manifolds: Euler characteristic, area and
//! the boundary-slope length budget.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tolerance;

/// Distance from an integer below which a real is treated as that integer
/// when extracting strict integer bounds.
const INTEGER_GUARD: f64 = 1e-9;

/// `4π²/√3`: the denominator bound per unit of genus.
pub fn denominator_per_genus() -> f64 {
    4.0 * PI * PI / 3f64.sqrt()
}

/// `2 - 2g - b` for orientable surfaces, `2 - g - b` with `g` crosscaps otherwise.
pub fn euler_characteristic(genus: u32, boundary_count: u32, orientable: bool) -> i64 {
    let (g, b) = (i64::from(genus), i64::from(boundary_count));
    if orientable {
        2 - 2 * g - b
    } else {
        2 - g - b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceData {
    genus: u32,
    boundary_count: u32,
    orientable: bool,
    euler: i64,
}

impl SurfaceData {
    pub fn new(genus: u32, boundary_count: u32, orientable: bool) -> Result<Self> {
        if boundary_count == 0 {
            return Err(Error::InvalidArgument("surface needs at least one boundary component".into()));
        }
        if !orientable && genus == 0 {
            return Err(Error::InvalidArgument("non-orientable surface needs at least one crosscap".into()));
        }
        let euler = euler_characteristic(genus, boundary_count, orientable);
        Ok(Self { genus, boundary_count, orientable, euler })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn boundary_count(&self) -> u32 {
        self.boundary_count
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }
}

/// Hyperbolic area of a cusped surface: `-2π χ`.
pub fn gauss_bonnet_area(euler: i64) -> Result<f64> {
    if euler >= 0 {
        return Err(Error::HypothesisNotMet(format!("χ = {euler} >= 0: no hyperbolic structure")));
    }
    Ok(-2.0 * PI * euler as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthAudit {
    pub slope_length: f64,
    pub boundary_curves: u32,
    pub euler: i64,
    /// `l(s)` times the number of boundary curves.
    pub consumed: f64,
    /// Surface area `-2π χ`.
    pub budget: f64,
    /// Supremum of slope lengths compatible with this surface.
    pub max_slope_length: f64,
    pub consistent: bool,
    /// Injectivity and essentiality are taken on trust.
    pub hypotheses: &'static str,
}

/// Checks `l(s) · curves < -2π χ(F)` strictly; a tie within tolerance
/// counts as a violation.
pub fn boundary_length_audit(slope_length: f64, boundary_curves: u32, surface: &SurfaceData) -> Result<LengthAudit> {
    if !(slope_length.is_finite() && slope_length > 0.0) {
        return Err(Error::InvalidArgument(format!("slope length {slope_length} must be positive")));
    }
    if boundary_curves == 0 {
        return Err(Error::InvalidArgument("need at least one boundary curve".into()));
    }
    let budget = gauss_bonnet_area(surface.euler()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let consumed = slope_length * f64::from(boundary_curves);
    Ok(LengthAudit {
        slope_length,
        boundary_curves,
        euler: surface.euler(),
        consumed,
        budget,
        max_slope_length: budget / f64::from(boundary_curves),
        consistent: !tolerance::approx_le(budget, consumed, tolerance::geometry()),
        hypotheses: "user-asserted",
    })
}

fn near_integer(x: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() <= INTEGER_GUARD).then_some(r)
}

/// Largest `|q|` with `|q| < 4π² g / √3`.
pub fn max_denominator_for_genus(genus: u32) -> Result<u64> {
    if genus == 0 {
        return Err(Error::HypothesisNotMet("planar surfaces are excluded".into()));
    }
    let x = denominator_per_genus() * f64::from(genus);
    let bound = near_integer(x).unwrap_or_else(|| x.ceil());
    Ok(bound as u64 - 1)
}

/// Smallest genus `g` with `4π² g / √3 > |q|`.
pub fn min_genus_for_denominator(q: i64) -> Result<u32> {
    if q == 0 {
        return Err(Error::InvalidArgument("denominator must be non-zero".into()));
    }
    let y = q.unsigned_abs() as f64 / denominator_per_genus();
    let g = near_integer(y).unwrap_or_else(|| y.floor()) + 1.0;
    Ok(g as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TradeoffQuery {
    Genus(u32),
    Denominator(i64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tradeoff {
    pub genus: u32,
    pub max_denominator: u64,
    /// `l(p/q) < 2π genus`.
    pub length_bound: f64,
    pub denominator: Option<i64>,
}

/// Genus against surgery denominator for an orientable non-planar
/// essential surface with one boundary curve.
pub fn genus_slope_tradeoff(query: TradeoffQuery) -> Result<Tradeoff> {
    let (genus, denominator) = match query {
        TradeoffQuery::Genus(g) => (g, None),
        TradeoffQuery::Denominator(q) => (min_genus_for_denominator(q)?, Some(q)),
    };
    Ok(Tradeoff {
        genus,
        max_denominator: max_denominator_for_genus(genus)?,
        length_bound: 2.0 * PI * f64::from(genus),
        denominator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(1, 1, true), -1);
        assert_eq!(euler_characteristic(0, 0, true), 2);
        assert_eq!(euler_characteristic(2, 3, true), -5);
        assert_eq!(euler_characteristic(1, 1, false), 0);
    }

    #[test]
    fn area() {
        assert!((gauss_bonnet_area(-1).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((gauss_bonnet_area(-5).unwrap() - 10.0 * PI).abs() < 1e-14);
        assert!(gauss_bonnet_area(0).is_err());
    }

    #[test]
    fn audit_examples() {
        let s = SurfaceData::new(1, 2, true).unwrap();
        assert_eq!(s.euler(), -2);
        assert!(boundary_length_audit(5.0, 2, &s).unwrap().consistent);
        let s = SurfaceData::new(1, 1, true).unwrap();
        assert!(!boundary_length_audit(2.0 * PI, 1, &s).unwrap().consistent);
        let s = SurfaceData::new(2, 1, true).unwrap();
        let a = boundary_length_audit(1.0, 1, &s).unwrap();
        assert!((a.max_slope_length - 6.0 * PI).abs() < 1e-14);
        let disc = SurfaceData::new(0, 1, true).unwrap();
        assert!(boundary_length_audit(1.0, 1, &disc).is_err());
    }

    #[test]
    fn tradeoff_examples() {
        assert_eq!(max_denominator_for_genus(1).unwrap(), 22);
        assert_eq!(min_genus_for_denominator(23).unwrap(), 2);
        assert_eq!(min_genus_for_denominator(-22).unwrap(), 1);
        assert!(max_denominator_for_genus(0).is_err());
        assert!(min_genus_for_denominator(0).is_err());
        let t = genus_slope_tradeoff(TradeoffQuery::Genus(1)).unwrap();
        assert!((t.length_bound - 2.0 * PI).abs() < 1e-15);
        for g in 1..=50 {
            let q = max_denominator_for_genus(g).unwrap() as i64;
            assert_eq!(min_genus_for_denominator(q).unwrap(), g);
        }
    }
}
