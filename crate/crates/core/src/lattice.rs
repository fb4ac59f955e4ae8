//! Euclidean geometry of cusp cross-section lattices.
//!
//! A cusp torus is the quotient of a horosphere by a rank-two translation
//! lattice spanned by `v1` and `v2`. A slope `(p, q)` is the unoriented
//! primitive class of `p*v1 + q*v2`, and its length is the Euclidean norm of
//! that translation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{self, approx_le};

/// Lower bound on the length of any slope of a maximal cusp.
pub const MAXIMAL_SHORTEST: f64 = 1.0;

/// Lower bound on the cross-section area of a maximal cusp (`sqrt 3`).
pub fn maximal_area() -> f64 {
    3f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanVector {
    pub x: f64,
    pub y: f64,
}

impl EuclideanVector {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Signed area `det(self, other)`.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for EuclideanVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for EuclideanVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for EuclideanVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<EuclideanVector> for f64 {
    type Output = EuclideanVector;
    fn mul(self, v: EuclideanVector) -> EuclideanVector {
        EuclideanVector::new(self * v.x, self * v.y)
    }
}

/// Unoriented primitive class `±(p, q)` in a lattice basis.
///
/// Always stored in canonical form: `q > 0`, or `q == 0` and `p == 1`.
/// The derived ordering is lexicographic on `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    /// Canonical representative of the class of `(p, q)`, after dividing by
    /// the gcd.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidSlope("(0, 0) is not a slope".into()));
        }
        if p == i64::MIN || q == i64::MIN {
            return Err(Error::InvalidSlope("coordinate out of range".into()));
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Self { p, q })
    }

    /// Like [`Slope::new`] but rejects non-primitive pairs instead of
    /// dividing them down.
    pub fn primitive(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidSlope("(0, 0) is not a slope".into()));
        }
        if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
            return Err(Error::InvalidSlope(format!("({p}, {q}) is not primitive")));
        }
        Self::new(p, q)
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    /// The slope `(1, 0)`, the first basis direction.
    pub fn meridian() -> Self {
        Self { p: 1, q: 0 }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Canonical form of `(p, q)`; free-function spelling of [`Slope::new`].
pub fn normalize_slope(p: i64, q: i64) -> Result<Slope> {
    Slope::new(p, q)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Geometric intersection number `|p1 q2 - p2 q1|`.
pub fn intersection_number(s1: Slope, s2: Slope) -> u64 {
    let d = s1.p as i128 * s2.q as i128 - s2.p as i128 * s1.q as i128;
    d.unsigned_abs() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeMeasurement {
    pub slope: Slope,
    pub translation: EuclideanVector,
    pub length: f64,
}

/// Outcome of the maximal-cusp checks (shortest slope >= 1, area >= sqrt 3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Admissibility {
    pub shortest: f64,
    pub area: f64,
    pub shortest_ok: bool,
    pub area_ok: bool,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.shortest_ok && self.area_ok
    }

    pub(crate) fn require(&self, what: &str) -> Result<()> {
        if !self.shortest_ok {
            return Err(Error::Precondition(format!("{what}: shortest slope length {} < 1", self.shortest)));
        }
        if !self.area_ok {
            return Err(Error::Precondition(format!("{what}: cross-section area {} < sqrt 3", self.area)));
        }
        Ok(())
    }
}

/// Translation lattice of a cusp cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuspLattice {
    v1: EuclideanVector,
    v2: EuclideanVector,
    claimed_maximal: bool,
}

impl CuspLattice {
    pub fn new(v1: EuclideanVector, v2: EuclideanVector, claimed_maximal: bool) -> Result<Self> {
        if !v1.is_finite() || !v2.is_finite() {
            return Err(Error::InvalidLattice("non-finite basis vector".into()));
        }
        let scale = v1.norm() * v2.norm();
        if scale == 0.0 || v1.cross(v2).abs() <= tolerance::geometry() * scale {
            return Err(Error::InvalidLattice("basis vectors are linearly dependent".into()));
        }
        let lattice = Self { v1, v2, claimed_maximal };
        if claimed_maximal {
            lattice.admissibility().require("lattice claimed maximal")?;
        }
        Ok(lattice)
    }

    pub fn v1(&self) -> EuclideanVector {
        self.v1
    }

    pub fn v2(&self) -> EuclideanVector {
        self.v2
    }

    pub fn claimed_maximal(&self) -> bool {
        self.claimed_maximal
    }

    /// Area of a fundamental parallelogram, `|det(v1, v2)|`.
    pub fn area(&self) -> f64 {
        self.v1.cross(self.v2).abs()
    }

    /// Same lattice with both basis vectors multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(format!("scale factor {c} must be positive")));
        }
        Self::new(c * self.v1, c * self.v2, false)
    }

    pub fn translation(&self, s: Slope) -> EuclideanVector {
        s.p as f64 * self.v1 + s.q as f64 * self.v2
    }

    pub fn slope_length(&self, s: Slope) -> SlopeMeasurement {
        let translation = self.translation(s);
        SlopeMeasurement { slope: s, translation, length: translation.norm() }
    }

    /// Gauss-reduced basis together with the unimodular change of basis:
    /// `u1 = m[0][0] v1 + m[0][1] v2`, `u2 = m[1][0] v1 + m[1][1] v2`, and
    /// `|u1| <= |u2|` with `u1` a shortest nonzero vector.
    fn reduced(&self) -> ([EuclideanVector; 2], [[i64; 2]; 2]) {
        let (mut a, mut b) = (self.v1, self.v2);
        let (mut ma, mut mb) = ([1i64, 0], [0i64, 1]);
        if b.norm_sq() < a.norm_sq() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut ma, &mut mb);
        }
        for _ in 0..200 {
            let mu = (a.dot(b) / a.norm_sq()).round();
            if mu != 0.0 {
                b = b - mu * a;
                let k = mu as i64;
                mb = [mb[0] - k * ma[0], mb[1] - k * ma[1]];
            }
            if b.norm_sq() >= a.norm_sq() {
                break;
            }
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut ma, &mut mb);
        }
        ([a, b], [ma, mb])
    }

    /// Length of a shortest nonzero lattice vector.
    pub fn shortest_length(&self) -> f64 {
        let ([u1, _], m) = self.reduced();
        // Re-evaluate through the original basis so the value agrees with
        // `slope_length` on the same class.
        let s = Slope::new(m[0][0], m[0][1]).expect("unimodular row is primitive");
        self.slope_length(s).length.min(u1.norm())
    }

    pub fn admissibility(&self) -> Admissibility {
        self.admissibility_at(1.0)
    }

    /// Checks shortest >= `l` and area >= sqrt(3) l^2.
    pub fn admissibility_at(&self, l: f64) -> Admissibility {
        let tol = tolerance::geometry();
        let shortest = self.shortest_length();
        let area = self.area();
        Admissibility {
            shortest,
            area,
            shortest_ok: approx_le(l * MAXIMAL_SHORTEST, shortest, tol),
            area_ok: approx_le(maximal_area() * l * l, area, tol),
        }
    }

    /// Coefficient bounds `(B1, B2)` such that every lattice vector
    /// `a u1 + b u2` of length <= `max_len` (in the reduced basis) has
    /// `|a| <= B1` and `|b| <= B2`.
    ///
    /// The distance from `a u1 + b u2` to the line spanned by `u1` is
    /// `|b| area / |u1|`, so `|b| <= max_len |u1| / area`; symmetrically for
    /// `a`. Computed from the Gram matrix of the reduced basis.
    fn coefficient_bounds(&self, u: &[EuclideanVector; 2], max_len: f64) -> (i64, i64) {
        let g11 = u[0].norm_sq();
        let g22 = u[1].norm_sq();
        let g12 = u[0].dot(u[1]);
        let det = (g11 * g22 - g12 * g12).max(0.0).sqrt();
        let h1 = det / g22.sqrt();
        let h2 = det / g11.sqrt();
        let bound = |h: f64| ((max_len / h) * (1.0 + 1e-12)).ceil() as i64 + 1;
        (bound(h1), bound(h2))
    }

    /// All canonical slopes of length at most `max_len`, sorted by
    /// `(length, p, q)`.
    pub fn enumerate_slopes(&self, max_len: f64) -> Result<Vec<SlopeMeasurement>> {
        if !(max_len.is_finite() && max_len > 0.0) {
            return Err(Error::InvalidArgument(format!("length bound {max_len} must be positive")));
        }
        let (u, m) = self.reduced();
        let (ba, bb) = self.coefficient_bounds(&u, max_len);
        let mut out = Vec::new();
        for b in 0..=bb {
            let a_range = if b == 0 { 1..=1 } else { -ba..=ba };
            for a in a_range {
                if gcd(a.unsigned_abs(), b.unsigned_abs()) != 1 {
                    continue;
                }
                // Back to the original basis; the map is unimodular so the
                // image is primitive and each class is visited once.
                let p = a * m[0][0] + b * m[1][0];
                let q = a * m[0][1] + b * m[1][1];
                let s = Slope::new(p, q).expect("nonzero");
                let meas = self.slope_length(s);
                if meas.length <= max_len {
                    out.push(meas);
                }
            }
        }
        out.sort_by(cmp_measurement);
        Ok(out)
    }

    /// A slope of globally minimal length; ties within the geometry
    /// tolerance go to the lexicographically smallest canonical `(p, q)`.
    pub fn minimal_slope(&self) -> SlopeMeasurement {
        let shortest = self.shortest_length();
        let tol = tolerance::geometry();
        let cutoff = shortest * (1.0 + 4.0 * tol);
        let candidates = self.enumerate_slopes(cutoff).expect("positive cutoff");
        let min_len = candidates.iter().map(|m| m.length).fold(f64::INFINITY, f64::min);
        candidates
            .into_iter()
            .filter(|m| m.length <= min_len * (1.0 + tol))
            .min_by_key(|m| m.slope)
            .expect("a reduced basis vector is always a candidate")
    }
}

/// Free-function spelling of [`CuspLattice::area`].
pub fn lattice_area(lattice: &CuspLattice) -> f64 {
    lattice.area()
}

pub(crate) fn cmp_measurement(a: &SlopeMeasurement, b: &SlopeMeasurement) -> Ordering {
    a.length.total_cmp(&b.length).then(a.slope.cmp(&b.slope))
}

/// Both sides of `|det(w1, w2)| = Δ(s1, s2) · area`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParallelogramReport {
    pub translation_area: f64,
    pub delta: u64,
    pub scaled_basis_area: f64,
    pub difference: f64,
    pub holds: bool,
}

pub fn parallelogram_identity_check(lattice: &CuspLattice, s1: Slope, s2: Slope) -> Result<ParallelogramReport> {
    if s1 == s2 {
        return Err(Error::DegeneratePair(format!("{s1} given twice")));
    }
    let w1 = lattice.translation(s1);
    let w2 = lattice.translation(s2);
    let lhs = w1.cross(w2).abs();
    let delta = intersection_number(s1, s2);
    let rhs = delta as f64 * lattice.area();
    let difference = (lhs - rhs).abs();
    Ok(ParallelogramReport {
        translation_area: lhs,
        delta,
        scaled_basis_area: rhs,
        difference,
        holds: difference <= tolerance::geometry() * 1f64.max(rhs),
    })
}

/// Product-of-lengths inequality `l(s1) l(s2) >= sqrt 3 L^2 Δ(s1, s2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthProductReport {
    pub length1: f64,
    pub length2: f64,
    pub product: f64,
    pub delta: u64,
    pub uniform_bound: f64,
    pub rhs: f64,
    pub holds: bool,
    /// The `L = 1` form, evaluated when the lattice is claimed maximal.
    pub unit_form: Option<UnitForm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitForm {
    pub rhs: f64,
    pub holds: bool,
}

/// Checks the product inequality for a uniform lower bound `l` on slope
/// lengths. The lattice must satisfy shortest >= `l` and area >=
/// sqrt(3) l^2; otherwise a precondition error names the failing check.
pub fn verify_length_product(lattice: &CuspLattice, s1: Slope, s2: Slope, l: f64) -> Result<LengthProductReport> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidArgument(format!("uniform length bound {l} must be positive")));
    }
    lattice.admissibility_at(l).require(&format!("uniform bound L = {l}"))?;
    let tol = tolerance::geometry();
    let m1 = lattice.slope_length(s1);
    let m2 = lattice.slope_length(s2);
    let product = m1.length * m2.length;
    let delta = intersection_number(s1, s2);
    let root3 = maximal_area();
    let rhs = root3 * l * l * delta as f64;
    let unit_form = lattice.claimed_maximal().then(|| {
        let rhs = root3 * delta as f64;
        UnitForm { rhs, holds: approx_le(rhs, product, tol) }
    });
    Ok(LengthProductReport {
        length1: m1.length,
        length2: m2.length,
        product,
        delta,
        uniform_bound: l,
        rhs,
        holds: approx_le(rhs, product, tol),
        unit_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(a: (f64, f64), b: (f64, f64)) -> CuspLattice {
        CuspLattice::new(EuclideanVector::new(a.0, a.1), EuclideanVector::new(b.0, b.1), false).unwrap()
    }

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(s(2, -4), s(-1, 2));
        assert_eq!((s(2, -4).p(), s(2, -4).q()), (-1, 2));
        assert_eq!((s(-3, 0).p(), s(-3, 0).q()), (1, 0));
        assert!(Slope::new(0, 0).is_err());
        assert!(Slope::primitive(2, 4).is_err());
        assert_eq!(Slope::primitive(-1, -3).unwrap(), s(1, 3));
    }

    #[test]
    fn lengths() {
        let l = lat((1.0, 0.0), (0.0, 2.0));
        assert_eq!(l.slope_length(s(1, 0)).length, 1.0);
        let m = l.slope_length(s(3, 2));
        assert_eq!(m.translation, EuclideanVector::new(3.0, 4.0));
        assert_eq!(m.length, 5.0);

        let hex = lat((1.0, 0.0), (0.5, 3f64.sqrt() / 2.0));
        let m = hex.slope_length(s(1, -1));
        assert_eq!(m.slope, s(-1, 1));
        assert!((m.translation.x + 0.5).abs() < 1e-15);
        assert!((m.length - 1.0).abs() < 1e-12);
    }

    #[test]
    fn intersections() {
        assert_eq!(intersection_number(s(1, 0), s(0, 1)), 1);
        assert_eq!(intersection_number(s(3, 5), s(3, 5)), 0);
        for q in 1..40 {
            assert_eq!(intersection_number(Slope::meridian(), s(7, q)), q as u64 / gcd(7, q as u64));
        }
    }

    #[test]
    fn areas() {
        assert_eq!(lat((1.0, 0.0), (0.0, 2.0)).area(), 2.0);
        assert_eq!(lat((2.0, 0.0), (1.0, 2.0)).area(), 4.0);
        let hex = lat((1.0, 0.0), (0.5, 3f64.sqrt() / 2.0));
        assert!((hex.area() - 0.8660254037844386).abs() < 1e-15);
        let adm = hex.admissibility();
        assert!(adm.shortest_ok && !adm.area_ok);
    }

    #[test]
    fn dependent_basis_rejected() {
        let e = CuspLattice::new(EuclideanVector::new(1.0, 2.0), EuclideanVector::new(2.0, 4.0), false);
        assert!(matches!(e, Err(Error::InvalidLattice(_))));
        let e = CuspLattice::new(EuclideanVector::new(f64::NAN, 0.0), EuclideanVector::new(0.0, 1.0), false);
        assert!(e.is_err());
    }

    #[test]
    fn maximal_claim_is_checked() {
        let hex = CuspLattice::new(EuclideanVector::new(1.0, 0.0), EuclideanVector::new(0.5, 3f64.sqrt() / 2.0), true);
        assert!(matches!(hex, Err(Error::Precondition(_))));
        assert!(CuspLattice::new(EuclideanVector::new(1.0, 0.0), EuclideanVector::new(0.0, 3f64.sqrt()), true).is_ok());
    }

    #[test]
    fn parallelogram() {
        let r = parallelogram_identity_check(&lat((1.0, 0.0), (0.0, 1.0)), s(1, 0), s(1, 2)).unwrap();
        assert_eq!((r.translation_area, r.scaled_basis_area, r.difference), (2.0, 2.0, 0.0));
        let r = parallelogram_identity_check(&lat((1.3, 0.2), (-0.1, 1.7)), s(2, 1), s(1, 3)).unwrap();
        assert!(r.holds && r.difference < 1e-9);
        assert_eq!(r.delta, 5);
        assert!(matches!(
            parallelogram_identity_check(&lat((1.3, 0.2), (-0.1, 1.7)), s(2, 1), s(-2, -1)),
            Err(Error::DegeneratePair(_))
        ));
    }

    #[test]
    fn square_two_enumeration() {
        let l = lat((2.0, 0.0), (0.0, 2.0));
        let got: Vec<_> = l
            .enumerate_slopes(2.0 * std::f64::consts::PI)
            .unwrap()
            .iter()
            .map(|m| (m.slope.p(), m.slope.q()))
            .collect();
        assert_eq!(got, vec![(0, 1), (1, 0), (-1, 1), (1, 1), (-2, 1), (-1, 2), (1, 2), (2, 1)]);
        assert!(l.enumerate_slopes(1.5).unwrap().is_empty());
        assert!(l.enumerate_slopes(0.0).is_err());
        let unit = lat((1.0, 0.0), (0.0, 1.0));
        assert_eq!(unit.enumerate_slopes(1.0).unwrap().len(), 2);
    }

    #[test]
    fn skewed_basis_enumeration() {
        // Same lattice as the 2x2 square, given by a long skewed basis.
        let l = lat((2.0, 0.0), (2.0 * 37.0, 2.0));
        let n = l.enumerate_slopes(2.0 * std::f64::consts::PI).unwrap().len();
        assert_eq!(n, 8);
    }

    #[test]
    fn minimal_slopes() {
        let m = lat((1.0, 0.0), (0.0, 2.0)).minimal_slope();
        assert_eq!((m.slope, m.length), (s(1, 0), 1.0));
        let m = lat((2.0, 0.0), (0.0, 2.0)).minimal_slope();
        assert_eq!(m.slope, s(0, 1));
        let c = 1.1;
        let hex = lat((c, 0.0), (0.5 * c, c * 3f64.sqrt() / 2.0));
        let m = hex.minimal_slope();
        assert!((m.length - 1.1).abs() < 1e-12);
        assert_eq!(m.slope, s(-1, 1));
    }

    #[test]
    fn length_product_gating() {
        let l = CuspLattice::new(EuclideanVector::new(1.0, 0.0), EuclideanVector::new(0.0, 3f64.sqrt()), true).unwrap();
        let r = verify_length_product(&l, s(1, 0), s(0, 1), 1.0).unwrap();
        assert!(r.holds);
        assert!((r.product - r.rhs).abs() < 1e-12);
        assert!(r.unit_form.unwrap().holds);

        let sq = lat((2.0, 0.0), (0.0, 2.0));
        let e = verify_length_product(&sq, s(1, 0), s(1, 5), 2.0).unwrap_err();
        assert!(matches!(e, Error::Precondition(ref m) if m.contains("area")));
    }
}
