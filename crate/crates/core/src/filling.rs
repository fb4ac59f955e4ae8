//! Certification predicates for Dehn fillings.
//!
//! Threshold conventions: "> 2π" and "> 22" are strict, "at least 7" is
//! inclusive. Comparisons carry the geometry tolerance in the conservative
//! direction, so a borderline case is never certified.
//!
//! Topological reasons for a slope to be short (reducible, toroidal or
//! Seifert fibred fillings, finite-order cores) are not computable from
//! lattice data. Here "short" is purely metric: length <= 2π.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{intersection_number, maximal_area, CuspLattice, Slope, SlopeMeasurement};
use crate::tolerance::{self, approx_le};

/// Distance from a short slope above which the length bound exceeds 2π.
pub const SHORT_DISTANCE_THRESHOLD: u64 = 22;
/// Distance from a minimal slope above which the length bound exceeds 2π.
pub const MINIMAL_DISTANCE_THRESHOLD: u64 = 3;
/// Largest number of short slopes on a maximal cusp.
pub const SHORT_SLOPE_BOUND: usize = 48;
/// Lifted meridian length guaranteed by branching index >= 7.
pub const BRANCHED_LENGTH_THRESHOLD: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    NotCertified,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Certified
        } else {
            Verdict::NotCertified
        }
    }

    pub fn is_certified(self) -> bool {
        self == Verdict::Certified
    }
}

/// Smallest integer `n` with `n sqrt 3 / 2π > 2π`, i.e. `ceil(4π²/sqrt 3)`.
pub fn surgery_distance_threshold() -> u64 {
    (4.0 * PI * PI / maximal_area()).ceil() as u64
}

/// `23 sqrt 3 / 2π - 2π`: the margin forced by distance >= 23 from a short
/// slope.
pub fn short_reference_margin() -> f64 {
    let n = (SHORT_DISTANCE_THRESHOLD + 1) as f64;
    n * maximal_area() / TAU - TAU
}

/// `3^{1/4} sqrt 23 - 2π`: the margin at which `(2π + ε)^2 = 23 sqrt 3`,
/// used when two slopes at distance >= 23 are both filled.
pub fn two_slope_margin() -> f64 {
    let n = (SHORT_DISTANCE_THRESHOLD + 1) as f64;
    3f64.powf(0.25) * n.sqrt() - TAU
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeClass {
    pub length: f64,
    pub short: bool,
    pub minimal: bool,
}

/// Short iff length <= 2π (boundary resolved as short); minimal iff the
/// length matches the minimal slope length within tolerance.
pub fn classify_slope(lattice: &CuspLattice, s: Slope) -> SlopeClass {
    let tol = tolerance::geometry();
    let length = lattice.slope_length(s).length;
    let minimal_len = lattice.minimal_slope().length;
    SlopeClass { length, short: approx_le(length, TAU, tol), minimal: approx_le(length, minimal_len, tol) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FillingEntry {
    pub cusp_id: String,
    pub lattice: CuspLattice,
    pub slope: Slope,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FillingSpec {
    entries: Vec<FillingEntry>,
    epsilon: f64,
}

impl FillingSpec {
    pub fn new(entries: Vec<FillingEntry>, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidArgument(format!("margin {epsilon} must be >= 0")));
        }
        if entries.is_empty() {
            return Err(Error::InvalidArgument("filling needs at least one cusp".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.cusp_id.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate cusp id `{}`", e.cusp_id)));
            }
        }
        Ok(Self { entries, epsilon })
    }

    pub fn entries(&self) -> &[FillingEntry] {
        &self.entries
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspMeasurement {
    pub cusp_id: String,
    #[serde(flatten)]
    pub measurement: SlopeMeasurement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub measurements: Vec<CuspMeasurement>,
    pub min_length: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub criterion: String,
}

/// Certified iff every filling slope is strictly longer than `2π + ε`.
pub fn certify_two_pi(spec: &FillingSpec) -> Certificate {
    let tol = tolerance::geometry();
    let threshold = TAU + spec.epsilon;
    let measurements: Vec<_> = spec
        .entries
        .iter()
        .map(|e| CuspMeasurement { cusp_id: e.cusp_id.clone(), measurement: e.lattice.slope_length(e.slope) })
        .collect();
    let min_length = measurements.iter().map(|m| m.measurement.length).fold(f64::INFINITY, f64::min);
    // Strict and conservative: a length within tolerance of the threshold
    // does not certify.
    let ok = !approx_le(min_length, threshold, tol);
    Certificate {
        measurements,
        min_length,
        threshold,
        verdict: Verdict::from_bool(ok),
        criterion: format!("every slope length > 2π + ε (ε = {})", spec.epsilon),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortSlopeCensus {
    pub slopes: Vec<SlopeMeasurement>,
    pub count: usize,
    pub within_bound: bool,
}

/// All slopes of length <= 2π on an admissible (maximal-type) lattice.
pub fn short_slope_census(lattice: &CuspLattice) -> Result<ShortSlopeCensus> {
    lattice.admissibility().require("short-slope census")?;
    let cutoff = TAU * (1.0 + tolerance::geometry());
    let slopes = lattice.enumerate_slopes(cutoff)?;
    let count = slopes.len();
    Ok(ShortSlopeCensus { slopes, count, within_bound: count <= SHORT_SLOPE_BOUND })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    Short,
    Minimal,
}

/// Length lower bound for a slope at distance `delta` from a short
/// (`sqrt 3 Δ / 2π`) or minimal (`sqrt 3 Δ`) reference slope.
pub fn lower_bound_from_reference(delta: u64, kind: ReferenceKind) -> Result<f64> {
    if delta == 0 {
        return Err(Error::DegeneratePair("distance 0: the slopes coincide".into()));
    }
    let base = maximal_area() * delta as f64;
    Ok(match kind {
        ReferenceKind::Short => base / TAU,
        ReferenceKind::Minimal => base,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceAudit {
    pub slope: Slope,
    pub reference: Slope,
    pub reference_class: SlopeClass,
    pub delta: u64,
    /// Distance hypothesis: reference short with Δ > 22, or minimal with Δ > 3.
    pub hypothesis_holds: bool,
    /// Best applicable lower bound on the slope length, if the reference is
    /// short or minimal.
    pub implied_bound: Option<f64>,
    pub measured_length: f64,
    /// Whether the lattice meets the hypotheses under which the implied
    /// bound is a theorem (area >= sqrt 3, and for the minimal bound also
    /// area >= sqrt(3) l(e)^2).
    pub bound_applicable: bool,
    pub bound_consistent: bool,
}

pub fn distance_criterion_audit(lattice: &CuspLattice, s: Slope, e: Slope) -> Result<DistanceAudit> {
    if s == e {
        return Err(Error::DegeneratePair(format!("slope and reference are both {s}")));
    }
    let tol = tolerance::geometry();
    let class = classify_slope(lattice, e);
    let delta = intersection_number(s, e);
    let hypothesis_holds =
        (class.short && delta > SHORT_DISTANCE_THRESHOLD) || (class.minimal && delta > MINIMAL_DISTANCE_THRESHOLD);

    let area = lattice.area();
    let short_ok = approx_le(maximal_area(), area, tol);
    let minimal_ok = short_ok && approx_le(maximal_area() * class.length * class.length, area, tol);

    let mut implied: Option<(f64, bool)> = None;
    let mut consider = |bound: f64, applicable: bool| {
        implied = match implied {
            Some((b, a)) if b >= bound => Some((b, a)),
            _ => Some((bound, applicable)),
        };
    };
    if class.short {
        consider(lower_bound_from_reference(delta, ReferenceKind::Short)?, short_ok);
    }
    if class.minimal {
        consider(lower_bound_from_reference(delta, ReferenceKind::Minimal)?, minimal_ok);
    }
    let measured_length = lattice.slope_length(s).length;
    let (implied_bound, bound_applicable) = match implied {
        Some((b, a)) => (Some(b), a),
        None => (None, false),
    };
    let bound_consistent = match implied_bound {
        Some(b) if bound_applicable => approx_le(b, measured_length, tol),
        _ => true,
    };
    Ok(DistanceAudit {
        slope: s,
        reference: e,
        reference_class: class,
        delta,
        hypothesis_holds,
        implied_bound,
        measured_length,
        bound_applicable,
        bound_consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionCheck {
    pub p: i64,
    pub q: i64,
    /// Distance from the meridian `1/0`, which equals `|q|`.
    pub delta: u64,
    pub satisfied: bool,
    pub implied_length_bound: f64,
}

/// `p/q` surgery against the `|q| > 22` criterion.
pub fn surgery_fraction_check(p: i64, q: i64) -> Result<FractionCheck> {
    if q == 0 && p.abs() != 1 {
        return Err(Error::InvalidSlope(format!("{p}/0 is not a fraction in lowest terms")));
    }
    let slope = Slope::primitive(p, q).map_err(|_| Error::InvalidSlope(format!("{p}/{q} is not in lowest terms")))?;
    let delta = intersection_number(Slope::meridian(), slope);
    debug_assert_eq!(delta, q.unsigned_abs());
    Ok(FractionCheck {
        p,
        q,
        delta,
        satisfied: delta > SHORT_DISTANCE_THRESHOLD,
        implied_length_bound: delta as f64 * maximal_area() / TAU,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryLift {
    pub branching_index: u32,
    pub meridian_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchedCoverSpec {
    degree: u32,
    lifts: Vec<BoundaryLift>,
    base_volume: Option<f64>,
}

impl BranchedCoverSpec {
    pub fn new(degree: u32, lifts: Vec<BoundaryLift>, base_volume: Option<f64>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("cover degree must be >= 1".into()));
        }
        if lifts.is_empty() {
            return Err(Error::InvalidArgument("cover needs at least one boundary lift".into()));
        }
        for (i, l) in lifts.iter().enumerate() {
            if l.branching_index == 0 {
                return Err(Error::InvalidArgument(format!("lift {i}: branching index must be >= 1")));
            }
            if !(l.meridian_length.is_finite() && l.meridian_length >= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "lift {i}: meridian length {} must be >= 1",
                    l.meridian_length
                )));
            }
        }
        if let Some(v) = base_volume {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("base volume {v} must be positive")));
            }
        }
        Ok(Self { degree, lifts, base_volume })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn lifts(&self) -> &[BoundaryLift] {
        &self.lifts
    }

    pub fn base_volume(&self) -> Option<f64> {
        self.base_volume
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverCertificate {
    pub lifted_lengths: Vec<f64>,
    pub min_lifted_length: f64,
    pub threshold: f64,
    pub cover_volume: Option<f64>,
    /// Base volume at least the cusp lower bound sqrt(3)/2.
    pub base_volume_ok: Option<bool>,
    pub verdict: Verdict,
}

/// Lifted slope length = branching index × base meridian length; certified
/// iff every lift reaches 7 and, when a base volume is given, it is at
/// least sqrt(3)/2.
pub fn certify_branched_cover(spec: &BranchedCoverSpec) -> CoverCertificate {
    let lifted_lengths: Vec<f64> = spec.lifts.iter().map(|l| l.branching_index as f64 * l.meridian_length).collect();
    let min_lifted_length = lifted_lengths.iter().copied().fold(f64::INFINITY, f64::min);
    let lengths_ok = min_lifted_length >= BRANCHED_LENGTH_THRESHOLD;
    let base_volume_ok = spec.base_volume.map(|v| v >= maximal_area() / 2.0);
    CoverCertificate {
        cover_volume: spec.base_volume.map(|v| spec.degree as f64 * v),
        verdict: Verdict::from_bool(lengths_ok && base_volume_ok.unwrap_or(true)),
        lifted_lengths,
        min_lifted_length,
        threshold: BRANCHED_LENGTH_THRESHOLD,
        base_volume_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EuclideanVector;

    fn lat(a: (f64, f64), b: (f64, f64), max: bool) -> CuspLattice {
        CuspLattice::new(EuclideanVector::new(a.0, a.1), EuclideanVector::new(b.0, b.1), max).unwrap()
    }

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn entry(id: &str, l: CuspLattice, sl: Slope) -> FillingEntry {
        FillingEntry { cusp_id: id.into(), lattice: l, slope: sl }
    }

    #[test]
    fn classification() {
        let sq = lat((2.0, 0.0), (0.0, 2.0), false);
        let c = classify_slope(&sq, s(1, 0));
        assert!(c.short && c.minimal);
        let c = classify_slope(&sq, s(3, 1));
        assert!(!c.short && !c.minimal);
        assert!((c.length - 2.0 * 10f64.sqrt()).abs() < 1e-12);
        let m = sq.minimal_slope();
        assert!(classify_slope(&sq, m.slope).minimal);
    }

    #[test]
    fn two_pi_certificates() {
        let spec = FillingSpec::new(vec![entry("a", lat((7.0, 0.0), (0.0, 7.0), false), s(1, 0))], 0.0).unwrap();
        assert!(certify_two_pi(&spec).verdict.is_certified());

        let l = lat((1.0, 0.0), (0.0, 3f64.sqrt()), true);
        let spec = FillingSpec::new(vec![entry("a", l, s(1, 0))], 0.0).unwrap();
        assert_eq!(certify_two_pi(&spec).verdict, Verdict::NotCertified);

        let spec = FillingSpec::new(
            vec![
                entry("a", lat((7.0, 0.0), (0.0, 9.0), false), s(1, 0)),
                entry("b", lat((6.5, 0.0), (0.0, 9.0), false), s(1, 0)),
            ],
            0.3,
        )
        .unwrap();
        let c = certify_two_pi(&spec);
        assert_eq!(c.min_length, 6.5);
        assert_eq!(c.verdict, Verdict::NotCertified);
        assert!((c.threshold - 6.583185307179586).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        let l = lat((7.0, 0.0), (0.0, 7.0), false);
        assert!(FillingSpec::new(vec![entry("a", l, s(1, 0)), entry("a", l, s(0, 1))], 0.0).is_err());
        assert!(FillingSpec::new(vec![entry("a", l, s(1, 0))], -0.1).is_err());
        assert!(FillingSpec::new(vec![], 0.0).is_err());
    }

    #[test]
    fn exact_threshold_is_not_certified() {
        let l = lat((TAU, 0.0), (0.0, 10.0), false);
        let spec = FillingSpec::new(vec![entry("a", l, s(1, 0))], 0.0).unwrap();
        assert_eq!(certify_two_pi(&spec).verdict, Verdict::NotCertified);
    }

    #[test]
    fn census_examples() {
        let c = short_slope_census(&lat((2.0, 0.0), (0.0, 2.0), false)).unwrap();
        assert_eq!(c.count, 8);
        assert!(c.within_bound);
        let big = TAU + 1.0;
        let c = short_slope_census(&lat((big, 0.0), (0.0, big), false)).unwrap();
        assert_eq!(c.count, 0);
        let hex = lat((1.0, 0.0), (0.5, 3f64.sqrt() / 2.0), false);
        assert!(matches!(short_slope_census(&hex), Err(Error::Precondition(_))));
    }

    #[test]
    fn reference_bounds() {
        let b = lower_bound_from_reference(23, ReferenceKind::Short).unwrap();
        assert!((b - 6.340282297350608).abs() < 1e-12);
        let b = lower_bound_from_reference(4, ReferenceKind::Minimal).unwrap();
        assert!((b - 4.0 * 3f64.sqrt()).abs() < 1e-15);
        assert!(b > TAU);
        let b = lower_bound_from_reference(22, ReferenceKind::Short).unwrap();
        assert!(b < TAU && (b - 6.0646178496397125).abs() < 1e-9);
        assert!(lower_bound_from_reference(0, ReferenceKind::Short).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(surgery_distance_threshold(), 23);
        assert!((short_reference_margin() - 0.0570969901710221).abs() < 1e-13);
        assert!((two_slope_margin() - 0.028483931150648623).abs() < 1e-13);
    }

    #[test]
    fn fractions() {
        let r = surgery_fraction_check(1, 23).unwrap();
        assert!(r.satisfied);
        assert!((r.implied_length_bound - 6.340282297350608).abs() < 1e-12);
        assert!(!surgery_fraction_check(5, 22).unwrap().satisfied);
        assert!(surgery_fraction_check(-3, -25).unwrap().satisfied);
        assert!(surgery_fraction_check(2, 4).is_err());
        assert!(surgery_fraction_check(2, 0).is_err());
        assert_eq!(surgery_fraction_check(1, 0).unwrap().delta, 0);
    }

    #[test]
    fn distance_audit_cases() {
        // Meridian of a long thin cusp: short and minimal.
        let l = lat((1.0, 0.0), (0.3, 40.0), false);
        let a = distance_criterion_audit(&l, s(2, 23), s(1, 0)).unwrap();
        assert_eq!(a.delta, 23);
        assert!(a.hypothesis_holds && a.reference_class.short);
        assert!(a.bound_applicable && a.bound_consistent);
        let a = distance_criterion_audit(&l, s(1, 22), s(1, 0)).unwrap();
        assert_eq!(a.delta, 22);
        // Still minimal with Δ > 3.
        assert!(a.hypothesis_holds);
        assert!(distance_criterion_audit(&l, s(1, 0), s(-1, 0)).is_err());
    }

    #[test]
    fn branched_covers() {
        let spec = BranchedCoverSpec::new(
            3,
            vec![
                BoundaryLift { branching_index: 7, meridian_length: 1.0 },
                BoundaryLift { branching_index: 7, meridian_length: 1.2 },
            ],
            Some(2.0),
        )
        .unwrap();
        let c = certify_branched_cover(&spec);
        assert_eq!(c.lifted_lengths[0], 7.0);
        assert!((c.lifted_lengths[1] - 8.4).abs() < 1e-12);
        assert_eq!(c.cover_volume, Some(6.0));
        assert!(c.verdict.is_certified());

        let spec = BranchedCoverSpec::new(
            1,
            vec![
                BoundaryLift { branching_index: 6, meridian_length: 1.0 },
                BoundaryLift { branching_index: 9, meridian_length: 1.0 },
            ],
            None,
        )
        .unwrap();
        assert!(!certify_branched_cover(&spec).verdict.is_certified());

        assert!(
            BranchedCoverSpec::new(1, vec![BoundaryLift { branching_index: 0, meridian_length: 1.0 }], None).is_err()
        );
        assert!(
            BranchedCoverSpec::new(1, vec![BoundaryLift { branching_index: 7, meridian_length: 0.9 }], None).is_err()
        );
    }
}
