#ifndef PERCLAB_H
#define PERCLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PerclabStatus {
  PERCLAB_STATUS_OK = 0,
  PERCLAB_STATUS_NULL_POINTER = 1,
  PERCLAB_STATUS_INVALID_UTF8 = 2,
  PERCLAB_STATUS_PARAMETER = 3,
  PERCLAB_STATUS_DOMAIN = 4,
  PERCLAB_STATUS_OUT_OF_PATCH = 5,
  PERCLAB_STATUS_ARGUMENT = 6,
  PERCLAB_STATUS_TRUNCATION = 7,
  PERCLAB_STATUS_CRITERION = 8,
  PERCLAB_STATUS_NON_MONOTONE = 9,
  PERCLAB_STATUS_INVARIANT = 10,
  PERCLAB_STATUS_PARSE = 11,
  PERCLAB_STATUS_CONFIG = 12,
  PERCLAB_STATUS_IO = 13,
  PERCLAB_STATUS_PANIC = 14,
} PerclabStatus;

/**
 * Opaque handle to a patch.
 */
typedef struct PerclabPatch PerclabPatch;

/**
 * A scalar Monte Carlo estimate with its 95% half-width.
 */
typedef struct PerclabEstimate {
  double mean;
  double ci_halfwidth;
  uint64_t replicas;
} PerclabEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *perclab_last_error(void);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void perclab_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *perclab_version(void);

/**
 * Builds the ball of the given radius in a family such as "hypercubic(2)".
 *
 * # Safety
 * `family` must be a NUL-terminated string; `out` must be writable.
 */
enum PerclabStatus perclab_patch_new(const char *family, size_t radius, struct PerclabPatch **out);

/**
 * Releases a patch. NULL is ignored.
 *
 * # Safety
 * `patch` must come from [`perclab_patch_new`] and must not be used afterwards.
 */
void perclab_patch_free(struct PerclabPatch *patch);

/**
 * # Safety
 * `patch` must be a live handle; `out` must be writable.
 */
enum PerclabStatus perclab_patch_vertex_count(const struct PerclabPatch *patch, size_t *out);

/**
 * # Safety
 * `patch` must be a live handle; `out` must be writable.
 */
enum PerclabStatus perclab_patch_edge_count(const struct PerclabPatch *patch, size_t *out);

/**
 * |B_n| for n up to the patch radius.
 *
 * # Safety
 * `patch` must be a live handle; `out` must be writable.
 */
enum PerclabStatus perclab_patch_growth(const struct PerclabPatch *patch, size_t n, uint64_t *out);

/**
 * Graph distance from the root.
 *
 * # Safety
 * `patch` must be a live handle; `out` must be writable.
 */
enum PerclabStatus perclab_patch_dist(const struct PerclabPatch *patch, size_t v, size_t *out);

/**
 * The patch in the text exchange format; free with [`perclab_string_free`].
 *
 * # Safety
 * `patch` must be a live handle; `out` must be writable.
 */
enum PerclabStatus perclab_patch_export(const struct PerclabPatch *patch, char **out);

/**
 * 1 - (1-p)^{e^lambda}.
 *
 * # Safety
 * `out` must be writable.
 */
enum PerclabStatus perclab_sprinkle(double p, double lambda, double *out);

/**
 * The sprinkling amount between p and q.
 *
 * # Safety
 * `out` must be writable.
 */
enum PerclabStatus perclab_delta(double p, double q, double *out);

/**
 * P_p(u <-> v) in the whole patch.
 *
 * # Safety
 * `patch` must be a live handle; `out` must be writable.
 */
enum PerclabStatus perclab_two_point(const struct PerclabPatch *patch,
                                     double p,
                                     size_t u,
                                     size_t v,
                                     uint64_t replicas,
                                     uint64_t seed,
                                     struct PerclabEstimate *out);

/**
 * P_p(o <-> S_r).
 *
 * # Safety
 * `patch` must be a live handle; `out` must be writable.
 */
enum PerclabStatus perclab_sphere_connection(const struct PerclabPatch *patch,
                                             double p,
                                             size_t r,
                                             uint64_t replicas,
                                             uint64_t seed,
                                             struct PerclabEstimate *out);

/**
 * P_p(Piv[m, n]).
 *
 * # Safety
 * `patch` must be a live handle; `out` must be writable.
 */
enum PerclabStatus perclab_piv(const struct PerclabPatch *patch,
                               double p,
                               size_t m,
                               size_t n,
                               uint64_t replicas,
                               uint64_t seed,
                               struct PerclabEstimate *out);

/**
 * Runs an experiment config file without writing output files; the records
 * come back as JSON lines. Free the string with [`perclab_string_free`].
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum PerclabStatus perclab_run_config(const char *path, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERCLAB_H */
