#ifndef DISCREPANCY_H
#define DISCREPANCY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum DiscStatus {
  DISC_STATUS_OK = 0,
  DISC_STATUS_NULL_POINTER = 1,
  DISC_STATUS_INVALID_ARGUMENT = 2,
  DISC_STATUS_PARSE = 3,
  DISC_STATUS_BUDGET_EXCEEDED = 4,
  DISC_STATUS_DIMENSION_MISMATCH = 5,
  DISC_STATUS_IO = 6,
  DISC_STATUS_PANIC = 7,
} DiscStatus;

/**
 * Opaque point-set handle.
 */
typedef struct DiscPointSet DiscPointSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a point set from its JSON form
 * `{"dim": d, "points": [["p/q", ...], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum DiscStatus disc_pointset_from_json(const char *json, struct DiscPointSet **out);

/**
 * Builds a point set from `n * dim` row-major numerators and denominators.
 *
 * # Safety
 * Both arrays must hold `n * dim` elements; `out` must be writable.
 */
enum DiscStatus disc_pointset_new(size_t dim,
                                  size_t n,
                                  const int64_t *numerators,
                                  const int64_t *denominators,
                                  struct DiscPointSet **out);

/**
 * Generates a point set from a spec such as `korobov:n=5,a=2,d=2`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a writable pointer.
 */
enum DiscStatus disc_pointset_generate(const char *spec, struct DiscPointSet **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void disc_pointset_free(struct DiscPointSet *set);

/**
 * Number of points; 0 for null.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t disc_pointset_len(const struct DiscPointSet *set);

/**
 * Dimension; 0 for null.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t disc_pointset_dim(const struct DiscPointSet *set);

/**
 * Exact `L_inf`. Either output may be null, not both.
 *
 * # Safety
 * `set` must be a live handle; outputs must be null or writable.
 */
enum DiscStatus disc_linf(const struct DiscPointSet *set, char **exact, double *approx);

/**
 * Exact `L_inf*`, the supremum over shifts.
 *
 * # Safety
 * As for [`disc_linf`].
 */
enum DiscStatus disc_linf_star(const struct DiscPointSet *set, char **exact, double *approx);

/**
 * Exact `sup_Z |lambda_J[D + Z]|`; bit `k` of `mask` selects coordinate `k + 1`.
 *
 * # Safety
 * As for [`disc_linf`].
 */
enum DiscStatus disc_lambda_star(const struct DiscPointSet *set,
                                 uint32_t mask,
                                 char **exact,
                                 double *approx);

/**
 * Exact `L_2^2` by the closed form.
 *
 * # Safety
 * As for [`disc_linf`].
 */
enum DiscStatus disc_l2_squared(const struct DiscPointSet *set, char **exact, double *approx);

/**
 * Exact `L_q^q` for even `q`.
 *
 * # Safety
 * As for [`disc_linf`].
 */
enum DiscStatus disc_lq_exact_even(const struct DiscPointSet *set,
                                   uint32_t q,
                                   char **exact,
                                   double *approx);

/**
 * Verdicts as a JSON array for a comma-separated inequality list (for
 * example `lemma1,lemma3,corollary`) at exponent `q` (`"p/q"`).
 *
 * # Safety
 * `set` must be a live handle, strings NUL-terminated, `json_out` writable.
 */
enum DiscStatus disc_verify(const struct DiscPointSet *set,
                            const char *inequalities,
                            const char *q,
                            char **json_out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void disc_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *disc_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *disc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISCREPANCY_H */
