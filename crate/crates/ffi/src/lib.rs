//! C ABI over `cuspgauge`.
//!
//! Objects cross the boundary as opaque handles (`CgLattice`, `CgProfile`)
//! created by `*_new`/`*_build` and released by `*_free`. Every fallible
//! call returns a [`CgStatus`] and writes results through out-pointers; the
//! message of the last failure on the calling thread is available from
//! [`cg_last_error_message`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cuspgauge::bounds;
use cuspgauge::filling::{self, FillingEntry, FillingSpec};
use cuspgauge::lattice::intersection_number;
use cuspgauge::metric::{self, AlphaOptions, GridOptions, MetricProfile};
use cuspgauge::{CuspLattice, Error, ErrorClass, EuclideanVector, Slope};

/// Result codes. `NotCertified` is a successful run with a negative answer.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NotCertified = 1,
    InvalidInput = 2,
    Infeasible = 3,
    Numerical = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Opaque cusp lattice.
pub struct CgLattice(CuspLattice);

/// Opaque sampled solid-torus metric.
pub struct CgProfile(MetricProfile);

/// Sample columns of a profile.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgColumn {
    R = 0,
    F = 1,
    G = 2,
    Df = 3,
    Dg = 4,
    D2f = 5,
    D2g = 6,
}

/// Pinching certificate of a profile.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CgPinch {
    pub a: f64,
    pub kappa_inf: f64,
    pub kappa_sup: f64,
    pub volume_ratio: f64,
    pub valid: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> CgStatus {
    let status = match e.class() {
        ErrorClass::InvalidInput => CgStatus::InvalidInput,
        ErrorClass::Infeasible => CgStatus::Infeasible,
        ErrorClass::Numerical => CgStatus::Numerical,
    };
    set_error(e.to_string());
    status
}

fn null(what: &str) -> CgStatus {
    set_error(format!("null pointer: {what}"));
    CgStatus::NullPointer
}

/// Runs `f`, converting panics into `CgStatus::Panic`.
fn guard<F: FnOnce() -> CgStatus>(f: F) -> CgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            CgStatus::Panic
        }
    }
}

macro_rules! out {
    ($ptr:ident) => {
        match unsafe { $ptr.as_mut() } {
            Some(p) => p,
            None => return null(stringify!($ptr)),
        }
    };
}

macro_rules! handle {
    ($ptr:ident) => {
        match unsafe { $ptr.as_ref() } {
            Some(h) => &h.0,
            None => return null(stringify!($ptr)),
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cg_status_name(status: CgStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CgStatus::Ok => c"ok",
        CgStatus::NotCertified => c"not-certified",
        CgStatus::InvalidInput => c"invalid-input",
        CgStatus::Infeasible => c"infeasible",
        CgStatus::Numerical => c"numerical-failure",
        CgStatus::NullPointer => c"null-pointer",
        CgStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Creates a lattice from the basis `(v1x, v1y)`, `(v2x, v2y)`.
///
/// # Safety
/// `out` must be a valid pointer. On success `*out` owns a handle that must
/// be released with [`cg_lattice_free`].
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_new(
    v1x: f64,
    v1y: f64,
    v2x: f64,
    v2y: f64,
    claimed_maximal: bool,
    out: *mut *mut CgLattice,
) -> CgStatus {
    guard(|| {
        let out = out!(out);
        *out = ptr::null_mut();
        match CuspLattice::new(EuclideanVector::new(v1x, v1y), EuclideanVector::new(v2x, v2y), claimed_maximal) {
            Ok(l) => {
                *out = Box::into_raw(Box::new(CgLattice(l)));
                CgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `lattice` must be NULL or a handle from [`cg_lattice_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_free(lattice: *mut CgLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_area(lattice: *const CgLattice, out: *mut f64) -> CgStatus {
    guard(|| {
        let l = handle!(lattice);
        *out!(out) = l.area();
        CgStatus::Ok
    })
}

/// Length of the slope `p/q`.
///
/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_slope_length(lattice: *const CgLattice, p: i64, q: i64, out: *mut f64) -> CgStatus {
    guard(|| {
        let l = handle!(lattice);
        let out = out!(out);
        match Slope::primitive(p, q) {
            Ok(s) => {
                *out = l.slope_length(s).length;
                CgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Shortest slope, smallest `(p, q)` among ties.
///
/// # Safety
/// `lattice` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_minimal_slope(
    lattice: *const CgLattice,
    out_p: *mut i64,
    out_q: *mut i64,
    out_length: *mut f64,
) -> CgStatus {
    guard(|| {
        let l = handle!(lattice);
        let (op, oq, ol) = (out!(out_p), out!(out_q), out!(out_length));
        let m = l.minimal_slope();
        *op = m.slope.p();
        *oq = m.slope.q();
        *ol = m.length;
        CgStatus::Ok
    })
}

/// Whether the lattice meets the maximal-cusp bounds (shortest >= 1, area >= sqrt 3).
///
/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_is_admissible(lattice: *const CgLattice, out: *mut bool) -> CgStatus {
    guard(|| {
        let l = handle!(lattice);
        *out!(out) = l.admissibility().admissible();
        CgStatus::Ok
    })
}

/// Number of slopes of length at most 2π. Requires an admissible lattice.
///
/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_lattice_short_slope_count(lattice: *const CgLattice, out: *mut usize) -> CgStatus {
    guard(|| {
        let l = handle!(lattice);
        let out = out!(out);
        match filling::short_slope_census(l) {
            Ok(c) => {
                *out = c.count;
                CgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `|p1 q2 - p2 q1|` for primitive slopes.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_intersection_number(p1: i64, q1: i64, p2: i64, q2: i64, out: *mut u64) -> CgStatus {
    guard(|| {
        let out = out!(out);
        match (Slope::primitive(p1, q1), Slope::primitive(p2, q2)) {
            (Ok(a), Ok(b)) => {
                *out = intersection_number(a, b);
                CgStatus::Ok
            }
            (Err(e), _) | (_, Err(e)) => fail(e),
        }
    })
}

/// Certifies that filling cusp `i` along `ps[i]/qs[i]` uses slopes longer
/// than 2π + ε. Returns `Ok` when certified, `NotCertified` otherwise;
/// the shortest filling slope length goes to `out_min_length`.
///
/// # Safety
/// `lattices`, `ps` and `qs` must each point to `n` readable elements, the
/// lattice handles must be live and `out_min_length` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cg_certify_two_pi(
    lattices: *const *const CgLattice,
    ps: *const i64,
    qs: *const i64,
    n: usize,
    epsilon: f64,
    out_min_length: *mut f64,
) -> CgStatus {
    guard(|| {
        let out = out!(out_min_length);
        if n == 0 {
            return fail(Error::InvalidArgument("no cusps".into()));
        }
        if lattices.is_null() || ps.is_null() || qs.is_null() {
            return null("lattices/ps/qs");
        }
        let (ls, ps, qs) = (
            std::slice::from_raw_parts(lattices, n),
            std::slice::from_raw_parts(ps, n),
            std::slice::from_raw_parts(qs, n),
        );
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let Some(l) = ls[i].as_ref() else {
                return null("lattice handle");
            };
            let slope = match Slope::primitive(ps[i], qs[i]) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            entries.push(FillingEntry { cusp_id: format!("cusp{i}"), lattice: l.0, slope });
        }
        let spec = match FillingSpec::new(entries, epsilon) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let cert = filling::certify_two_pi(&spec);
        *out = cert.min_length;
        if cert.verdict.is_certified() {
            CgStatus::Ok
        } else {
            CgStatus::NotCertified
        }
    })
}

/// Whether the surgery coefficient `p/q` has `|q| > 22`.
#[no_mangle]
pub extern "C" fn cg_fraction_check(p: i64, q: i64) -> CgStatus {
    guard(|| match filling::surgery_fraction_check(p, q) {
        Ok(c) if c.satisfied => CgStatus::Ok,
        Ok(_) => CgStatus::NotCertified,
        Err(e) => fail(e),
    })
}

/// Builds the solid-torus profile with meridian `l1`, longitude `l2` and
/// pinching target `t` on `samples` grid points (0 selects the default).
///
/// # Safety
/// `out` must be a valid pointer. On success `*out` owns a handle that must
/// be released with [`cg_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn cg_profile_build(
    l1: f64,
    l2: f64,
    t: f64,
    samples: usize,
    out: *mut *mut CgProfile,
) -> CgStatus {
    guard(|| {
        let out = out!(out);
        *out = ptr::null_mut();
        let mut opts = GridOptions::default();
        if samples != 0 {
            opts.samples = samples;
        }
        match metric::build_profile(l1, l2, t, &opts) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CgProfile(p)));
                CgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `profile` must be NULL or a handle from [`cg_profile_build`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_profile_free(profile: *mut CgProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Number of samples.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_profile_len(profile: *const CgProfile, out: *mut usize) -> CgStatus {
    guard(|| {
        let p = handle!(profile);
        *out!(out) = p.len();
        CgStatus::Ok
    })
}

/// Copies one column into `buf`, which must hold `cg_profile_len` values.
///
/// # Safety
/// `profile` must be a live handle and `buf` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_profile_copy_column(
    profile: *const CgProfile,
    column: CgColumn,
    buf: *mut f64,
    len: usize,
) -> CgStatus {
    guard(|| {
        let p = handle!(profile);
        if buf.is_null() {
            return null("buf");
        }
        let src = match column {
            CgColumn::R => p.r(),
            CgColumn::F => p.f(),
            CgColumn::G => p.g(),
            CgColumn::Df => p.df(),
            CgColumn::Dg => p.dg(),
            CgColumn::D2f => p.d2f(),
            CgColumn::D2g => p.d2g(),
        };
        if len < src.len() {
            return fail(Error::InvalidArgument(format!("buffer holds {len} values, need {}", src.len())));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
        CgStatus::Ok
    })
}

/// Pinching certificate `a = min(-κ_sup, -1/κ_inf, 2 Vol / Vol ∂)`.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_profile_pinch(profile: *const CgProfile, out: *mut CgPinch) -> CgStatus {
    guard(|| {
        let p = handle!(profile);
        let out = out!(out);
        match metric::pinch_certificate(p) {
            Ok(c) => {
                *out = CgPinch {
                    a: c.a,
                    kappa_inf: c.kappa_inf,
                    kappa_sup: c.kappa_sup,
                    volume_ratio: c.volume_ratio,
                    valid: c.valid,
                };
                CgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Best certified pinching constant for meridian length `l1`, and the
/// pinching target where it was found.
///
/// # Safety
/// `out_alpha` and `out_t` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cg_alpha_estimate(l1: f64, out_alpha: *mut f64, out_t: *mut f64) -> CgStatus {
    guard(|| {
        let (oa, ot) = (out!(out_alpha), out!(out_t));
        match metric::alpha_estimate(l1, &AlphaOptions::default()) {
            Ok(e) => {
                *oa = e.alpha;
                *ot = e.t;
                CgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Volume of the regular ideal tetrahedron.
#[no_mangle]
pub extern "C" fn cg_ideal_simplex_volume() -> f64 {
    bounds::ideal_simplex_volume()
}

/// `β(α) = α^(-5/2) π / (2 v3)` for `α` in (0, 1].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_beta_from_alpha(alpha: f64, out: *mut f64) -> CgStatus {
    guard(|| {
        let out = out!(out);
        match bounds::beta_from_alpha(alpha) {
            Ok(b) => {
                *out = b;
                CgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
