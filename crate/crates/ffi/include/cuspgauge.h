#ifndef CUSPGAUGE_H
#define CUSPGAUGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Sample columns of a profile.
 */
typedef enum CgColumn {
  CG_COLUMN_R = 0,
  CG_COLUMN_F = 1,
  CG_COLUMN_G = 2,
  CG_COLUMN_DF = 3,
  CG_COLUMN_DG = 4,
  CG_COLUMN_D2F = 5,
  CG_COLUMN_D2G = 6,
} CgColumn;

/**
 * Result codes. `NotCertified` is a successful run with a negative answer.
 */
typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_NOT_CERTIFIED = 1,
  CG_STATUS_INVALID_INPUT = 2,
  CG_STATUS_INFEASIBLE = 3,
  CG_STATUS_NUMERICAL = 4,
  CG_STATUS_NULL_POINTER = 5,
  CG_STATUS_PANIC = 6,
} CgStatus;

/**
 * Opaque cusp lattice.
 */
typedef struct CgLattice CgLattice;

/**
 * Opaque sampled solid-torus metric.
 */
typedef struct CgProfile CgProfile;

/**
 * Pinching certificate of a profile.
 */
typedef struct CgPinch {
  double a;
  double kappa_inf;
  double kappa_sup;
  double volume_ratio;
  bool valid;
} CgPinch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cg_version(void);

/**
 * Message of the last failed call on this thread, or NULL.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *cg_last_error_message(void);

/**
 * Static description of a status code.
 */
const char *cg_status_name(enum CgStatus status);

/**
 * Creates a lattice from the basis `(v1x, v1y)`, `(v2x, v2y)`.
 *
 * # Safety
 * `out` must be a valid pointer. On success `*out` owns a handle that must
 * be released with [`cg_lattice_free`].
 */
enum CgStatus cg_lattice_new(double v1x,
                             double v1y,
                             double v2x,
                             double v2y,
                             bool claimed_maximal,
                             struct CgLattice **out);

/**
 * # Safety
 * `lattice` must be NULL or a handle from [`cg_lattice_new`] not yet freed.
 */
void cg_lattice_free(struct CgLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle and `out` a valid pointer.
 */
enum CgStatus cg_lattice_area(const struct CgLattice *lattice, double *out);

/**
 * Length of the slope `p/q`.
 *
 * # Safety
 * `lattice` must be a live handle and `out` a valid pointer.
 */
enum CgStatus cg_lattice_slope_length(const struct CgLattice *lattice,
                                      int64_t p,
                                      int64_t q,
                                      double *out);

/**
 * Shortest slope, smallest `(p, q)` among ties.
 *
 * # Safety
 * `lattice` must be a live handle; the out-pointers must be valid.
 */
enum CgStatus cg_lattice_minimal_slope(const struct CgLattice *lattice,
                                       int64_t *out_p,
                                       int64_t *out_q,
                                       double *out_length);

/**
 * Whether the lattice meets the maximal-cusp bounds (shortest >= 1, area >= sqrt 3).
 *
 * # Safety
 * `lattice` must be a live handle and `out` a valid pointer.
 */
enum CgStatus cg_lattice_is_admissible(const struct CgLattice *lattice, bool *out);

/**
 * Number of slopes of length at most 2π. Requires an admissible lattice.
 *
 * # Safety
 * `lattice` must be a live handle and `out` a valid pointer.
 */
enum CgStatus cg_lattice_short_slope_count(const struct CgLattice *lattice, size_t *out);

/**
 * `|p1 q2 - p2 q1|` for primitive slopes.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CgStatus cg_intersection_number(int64_t p1, int64_t q1, int64_t p2, int64_t q2, uint64_t *out);

/**
 * Certifies that filling cusp `i` along `ps[i]/qs[i]` uses slopes longer
 * than 2π + ε. Returns `Ok` when certified, `NotCertified` otherwise;
 * the shortest filling slope length goes to `out_min_length`.
 *
 * # Safety
 * `lattices`, `ps` and `qs` must each point to `n` readable elements, the
 * lattice handles must be live and `out_min_length` must be valid.
 */
enum CgStatus cg_certify_two_pi(const struct CgLattice *const *lattices,
                                const int64_t *ps,
                                const int64_t *qs,
                                size_t n,
                                double epsilon,
                                double *out_min_length);

/**
 * Whether the surgery coefficient `p/q` has `|q| > 22`.
 */
enum CgStatus cg_fraction_check(int64_t p, int64_t q);

/**
 * Builds the solid-torus profile with meridian `l1`, longitude `l2` and
 * pinching target `t` on `samples` grid points (0 selects the default).
 *
 * # Safety
 * `out` must be a valid pointer. On success `*out` owns a handle that must
 * be released with [`cg_profile_free`].
 */
enum CgStatus cg_profile_build(double l1,
                               double l2,
                               double t,
                               size_t samples,
                               struct CgProfile **out);

/**
 * # Safety
 * `profile` must be NULL or a handle from [`cg_profile_build`] not yet freed.
 */
void cg_profile_free(struct CgProfile *profile);

/**
 * Number of samples.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum CgStatus cg_profile_len(const struct CgProfile *profile, size_t *out);

/**
 * Copies one column into `buf`, which must hold `cg_profile_len` values.
 *
 * # Safety
 * `profile` must be a live handle and `buf` must point to `len` writable
 * doubles.
 */
enum CgStatus cg_profile_copy_column(const struct CgProfile *profile,
                                     enum CgColumn column,
                                     double *buf,
                                     size_t len);

/**
 * Pinching certificate `a = min(-κ_sup, -1/κ_inf, 2 Vol / Vol ∂)`.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum CgStatus cg_profile_pinch(const struct CgProfile *profile, struct CgPinch *out);

/**
 * Best certified pinching constant for meridian length `l1`, and the
 * pinching target where it was found.
 *
 * # Safety
 * `out_alpha` and `out_t` must be valid pointers.
 */
enum CgStatus cg_alpha_estimate(double l1, double *out_alpha, double *out_t);

/**
 * Volume of the regular ideal tetrahedron.
 */
double cg_ideal_simplex_volume(void);

/**
 * `β(α) = α^(-5/2) π / (2 v3)` for `α` in (0, 1].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CgStatus cg_beta_from_alpha(double alpha, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUSPGAUGE_H */
