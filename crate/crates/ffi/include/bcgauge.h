#ifndef BCGAUGE_H
#define BCGAUGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero values match the exit codes of the CLI.
 */
typedef enum BcgStatus {
  BCG_STATUS_OK = 0,
  BCG_STATUS_CHECK_FAILED = 1,
  BCG_STATUS_NULL_CONE = 2,
  BCG_STATUS_UNSUPPORTED = 3,
  BCG_STATUS_NOT_ABSORBED = 4,
  BCG_STATUS_MISMATCH = 5,
  BCG_STATUS_INVALID = 64,
  BCG_STATUS_NULL_POINTER = 65,
  BCG_STATUS_PANIC = 66,
} BcgStatus;

/**
 * Opaque seminorm family handle.
 */
typedef struct BcgFamily BcgFamily;

/**
 * Opaque set handle.
 */
typedef struct BcgSet BcgSet;

/**
 * Opaque vector handle.
 */
typedef struct BcgVector BcgVector;

/**
 * `w1 + j·w2` with `w1, w2` in `C(i)`.
 */
typedef struct BcgBicomplex {
  double w1_re;
  double w1_im;
  double w2_re;
  double w2_im;
} BcgBicomplex;

/**
 * `e1·a1 + e2·a2`.
 */
typedef struct BcgHyperbolic {
  double e1;
  double e2;
} BcgHyperbolic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or NULL. Release
 * with `bcg_string_free`.
 */
char *bcg_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void bcg_string_free(char *s);

/**
 * `result = a·b`.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum BcgStatus bcg_bicomplex_mul(const struct BcgBicomplex *a,
                                 const struct BcgBicomplex *b,
                                 struct BcgBicomplex *result);

/**
 * `result = 1/a`; `BCG_STATUS_NULL_CONE` for non-invertible `a`.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum BcgStatus bcg_bicomplex_inverse(const struct BcgBicomplex *a, struct BcgBicomplex *result);

/**
 * The hyperbolic modulus `|a|_k`.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum BcgStatus bcg_bicomplex_knorm(const struct BcgBicomplex *a, struct BcgHyperbolic *result);

/**
 * Idempotent components as `[z1.re, z1.im, z2.re, z2.im]`.
 *
 * # Safety
 * `a` must be valid or NULL; `parts` must point to 4 writable doubles or be NULL.
 */
enum BcgStatus bcg_bicomplex_idempotent(const struct BcgBicomplex *a, double *parts);

/**
 * `e1·z1 + e2·z2`.
 *
 * # Safety
 * `result` must be valid or NULL.
 */
enum BcgStatus bcg_bicomplex_from_idempotent(double z1_re,
                                             double z1_im,
                                             double z2_re,
                                             double z2_im,
                                             struct BcgBicomplex *result);

/**
 * Evaluates an expression in the calculator language.
 *
 * # Safety
 * `expr` must be a NUL-terminated string or NULL; `result` valid or NULL.
 */
enum BcgStatus bcg_eval(const char *expr, struct BcgBicomplex *result);

/**
 * Builds a vector from `len` entries.
 *
 * # Safety
 * `entries` must point to `len` values; `vector` must be valid or NULL.
 */
enum BcgStatus bcg_vector_new(const struct BcgBicomplex *entries,
                              size_t len,
                              struct BcgVector **vector);

/**
 * Parses a vector from `{"dim":n,"entries":[...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string or NULL; `vector` valid or NULL.
 */
enum BcgStatus bcg_vector_from_json(const char *json, struct BcgVector **vector);

/**
 * # Safety
 * `vector` must be valid or NULL.
 */
enum BcgStatus bcg_vector_dim(const struct BcgVector *vector, size_t *dim);

/**
 * # Safety
 * `vector` must come from this library and not have been freed; NULL is ignored.
 */
void bcg_vector_free(struct BcgVector *vector);

/**
 * Parses and validates a set description.
 *
 * # Safety
 * `json` must be a NUL-terminated string or NULL; `set` valid or NULL.
 */
enum BcgStatus bcg_set_from_json(const char *json, struct BcgSet **set);

/**
 * # Safety
 * `set` must come from this library and not have been freed; NULL is ignored.
 */
void bcg_set_free(struct BcgSet *set);

/**
 * # Safety
 * Handles must be valid or NULL.
 */
enum BcgStatus bcg_set_contains(const struct BcgSet *set,
                                const struct BcgVector *x,
                                bool *contained);

/**
 * Closed-form Minkowski gauge.
 *
 * # Safety
 * Handles must be valid or NULL.
 */
enum BcgStatus bcg_set_gauge(const struct BcgSet *set,
                             const struct BcgVector *x,
                             struct BcgHyperbolic *result);

/**
 * Gauge by componentwise bisection to width `tol`.
 *
 * # Safety
 * Handles must be valid or NULL.
 */
enum BcgStatus bcg_set_gauge_bisect(const struct BcgSet *set,
                                    const struct BcgVector *x,
                                    double tol,
                                    struct BcgHyperbolic *result);

/**
 * Parses a seminorm family `{"seminorms":[...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string or NULL; `family` valid or NULL.
 */
enum BcgStatus bcg_family_from_json(const char *json, struct BcgFamily **family);

/**
 * # Safety
 * `family` must come from this library and not have been freed; NULL is ignored.
 */
void bcg_family_free(struct BcgFamily *family);

/**
 * The D-metric truncated to `terms` terms; the remainder is at most `2^-terms`.
 *
 * # Safety
 * Handles must be valid or NULL.
 */
enum BcgStatus bcg_family_dmetric(const struct BcgFamily *family,
                                  const struct BcgVector *x,
                                  const struct BcgVector *y,
                                  size_t terms,
                                  struct BcgHyperbolic *result);

/**
 * Runs a check suite (`scalar`, `sets`, `gauge`, `seminorm`, `metric` or
 * `all`) and stores the JSON-lines report in `report`. Returns
 * `BCG_STATUS_CHECK_FAILED` when any check fails; the report is written
 * either way.
 *
 * # Safety
 * `suite` must be a NUL-terminated string or NULL; `report` valid or NULL.
 */
enum BcgStatus bcg_run_checks(const char *suite,
                              uint64_t seed,
                              size_t samples,
                              size_t dimension,
                              char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BCGAUGE_H */
