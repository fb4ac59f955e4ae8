use std::collections::BTreeMap;

use cuspgauge::filling;
use cuspgauge::lattice::{intersection_number, verify_length_product};
use cuspgauge::{CuspLattice, EuclideanVector, Slope};
use proptest::prelude::*;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Every primitive `(p, q)` with `|p v1 + q v2| <= max_len`, by scanning a
/// box derived from the lattice heights. Keys are canonical (`q > 0`, or `1/0`).
fn brute_force(v1: (f64, f64), v2: (f64, f64), max_len: f64) -> BTreeMap<(i64, i64), f64> {
    let area = (v1.0 * v2.1 - v1.1 * v2.0).abs();
    let n1 = (v1.0.hypot(v1.1) * max_len / area).ceil() as i64 + 1;
    let n2 = (v2.0.hypot(v2.1) * max_len / area).ceil() as i64 + 1;
    let mut out = BTreeMap::new();
    for q in 0..=n1 {
        for p in -n2..=n2 {
            if (p, q) == (0, 0) || gcd(p, q) != 1 || (q == 0 && p != 1) {
                continue;
            }
            let x = p as f64 * v1.0 + q as f64 * v2.0;
            let y = p as f64 * v1.1 + q as f64 * v2.1;
            let len = x.hypot(y);
            if len <= max_len {
                out.insert((p, q), len);
            }
        }
    }
    out
}

fn basis() -> impl Strategy<Value = ((f64, f64), (f64, f64))> {
    (0.3f64..3.0, -2.0f64..2.0, -2.0f64..2.0, 0.3f64..3.0)
        .prop_filter("non-degenerate", |(a, b, c, d)| (a * d - b * c).abs() > 0.2)
        .prop_map(|(a, b, c, d)| ((a, b), (c, d)))
}

fn lattice(v1: (f64, f64), v2: (f64, f64)) -> CuspLattice {
    CuspLattice::new(EuclideanVector::new(v1.0, v1.1), EuclideanVector::new(v2.0, v2.1), false).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumeration_matches_brute_force((v1, v2) in basis(), max_len in 0.5f64..9.0) {
        let l = lattice(v1, v2);
        let got = l.enumerate_slopes(max_len).unwrap();
        let want = brute_force(v1, v2, max_len);
        // Skip lengths that sit on the cutoff, where rounding decides.
        let fuzzy = |len: f64| (len - max_len).abs() < 1e-9;
        let got_map: BTreeMap<_, _> = got.iter().map(|m| ((m.slope.p(), m.slope.q()), m.length)).collect();
        for (k, len) in &want {
            if !fuzzy(*len) {
                prop_assert!(got_map.contains_key(k), "missing {:?} ({})", k, len);
            }
        }
        for (k, len) in &got_map {
            prop_assert!(*len <= max_len + 1e-9);
            match want.get(k) {
                Some(w) => prop_assert!((w - len).abs() <= 1e-12 * w.max(1.0)),
                None => prop_assert!(fuzzy(*len), "extra {:?}", k),
            }
        }
        // Sorted by length.
        prop_assert!(got.windows(2).all(|w| w[0].length <= w[1].length));
    }

    #[test]
    fn minimal_slope_is_shortest((v1, v2) in basis()) {
        let l = lattice(v1, v2);
        let m = l.minimal_slope();
        let reach = v1.0.hypot(v1.1).min(v2.0.hypot(v2.1)) + 1e-9;
        let best = brute_force(v1, v2, reach).values().copied().fold(f64::INFINITY, f64::min);
        prop_assert!((m.length - best).abs() <= 1e-12 * best);
        prop_assert!((l.shortest_length() - best).abs() <= 1e-12 * best);
    }

    #[test]
    fn lengths_survive_basis_change((v1, v2) in basis(), k in -4i64..=4, swap in any::<bool>()) {
        // New basis (v1', v2') = (v1 + k v2, v2), optionally swapped; the
        // set of short vectors is a lattice invariant.
        let w1 = (v1.0 + k as f64 * v2.0, v1.1 + k as f64 * v2.1);
        let (a, b) = if swap { (v2, w1) } else { (w1, v2) };
        let sorted = |l: &CuspLattice| {
            let mut v: Vec<f64> = l.enumerate_slopes(6.0).unwrap().iter().map(|m| m.length).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let (x, y) = (sorted(&lattice(v1, v2)), sorted(&lattice(a, b)));
        // Compare away from the cutoff.
        let strip = |v: Vec<f64>| v.into_iter().filter(|l| *l < 6.0 - 1e-6).collect::<Vec<_>>();
        let (x, y) = (strip(x), strip(y));
        prop_assert_eq!(x.len(), y.len());
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() <= 1e-9);
        }
        prop_assert!((lattice(v1, v2).area() - lattice(a, b).area()).abs() <= 1e-9);
    }

    #[test]
    fn intersection_number_is_symmetric_and_invariant(p1 in -50i64..50, q1 in -50i64..50, p2 in -50i64..50, q2 in -50i64..50, k in -5i64..5) {
        prop_assume!((p1, q1) != (0, 0) && (p2, q2) != (0, 0));
        let (s1, s2) = (Slope::new(p1, q1).unwrap(), Slope::new(p2, q2).unwrap());
        let d = intersection_number(s1, s2);
        prop_assert_eq!(d, intersection_number(s2, s1));
        prop_assert_eq!(intersection_number(s1, s1), 0);
        // Shear (p, q) -> (p + k q, q) preserves the determinant.
        let shear = |s: Slope| Slope::new(s.p() + k * s.q(), s.q()).unwrap();
        prop_assert_eq!(d, intersection_number(shear(s1), shear(s2)));
        prop_assert_eq!(d, (s1.p() * s2.q() - s2.p() * s1.q()).unsigned_abs());
    }

    #[test]
    fn product_inequality_on_maximal_lattices(a in 1.0f64..2.5, t in 0.0f64..1.0, stretch in 1.0f64..3.0, p in -6i64..6, q in 0i64..6, r in -6i64..6, s in 0i64..6) {
        prop_assume!(gcd(p, q) == 1 && gcd(r, s) == 1 && (p * s - r * q) != 0);
        prop_assume!((q > 0 || p == 1) && (s > 0 || r == 1));
        let x = (t - 0.5) * a;
        let y = ((a * a - x * x).sqrt().max(3f64.sqrt() / a)) * stretch;
        let l = CuspLattice::new(EuclideanVector::new(a, 0.0), EuclideanVector::new(x, y), true).unwrap();
        let rep = verify_length_product(&l, Slope::new(p, q).unwrap(), Slope::new(r, s).unwrap(), 1.0).unwrap();
        prop_assert!(rep.holds);
        prop_assert!(rep.unit_form.unwrap().holds);
        let census = filling::short_slope_census(&l).unwrap();
        prop_assert!(census.count <= filling::SHORT_SLOPE_BOUND);
    }
}

#[test]
fn product_inequality_requires_admissibility() {
    let thin = lattice((0.5, 0.0), (0.0, 5.0));
    let err = verify_length_product(&thin, Slope::new(1, 0).unwrap(), Slope::new(0, 1).unwrap(), 1.0).unwrap_err();
    assert!(err.to_string().contains("shortest"), "{err}");
    let small = lattice((1.0, 0.0), (0.0, 1.0));
    assert!(verify_length_product(&small, Slope::new(1, 0).unwrap(), Slope::new(0, 1).unwrap(), 1.0).is_err());
}

#[test]
fn square_census() {
    let l = lattice((2.0, 0.0), (0.0, 2.0));
    let c = filling::short_slope_census(&l).unwrap();
    // 1/0, 0/1, ±1/1, ±2/1, ±1/2 all have length <= 2π.
    assert_eq!(c.count, 8);
    let hex = lattice((1.0, 0.0), (0.5, 3f64.sqrt()));
    assert!(filling::short_slope_census(&hex).unwrap().count <= 48);
}
