#ifndef QUBOPRESS_H
#define QUBOPRESS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QpStatus {
  QP_STATUS_OK = 0,
  QP_STATUS_NULL_POINTER = 1,
  QP_STATUS_INVALID_ARGUMENT = 2,
  QP_STATUS_INDEX_OUT_OF_RANGE = 3,
  QP_STATUS_PARSE = 4,
  QP_STATUS_IO = 5,
  QP_STATUS_ENUMERATION_LIMIT = 6,
  QP_STATUS_DEGENERATE = 7,
  QP_STATUS_BUFFER_TOO_SMALL = 8,
  QP_STATUS_PANIC = 9,
  QP_STATUS_OTHER = 10,
} QpStatus;

typedef enum QpHeuristic {
  QP_HEURISTIC_G = 0,
  QP_HEURISTIC_G0 = 1,
  QP_HEURISTIC_M = 2,
} QpHeuristic;

typedef enum QpSelection {
  QP_SELECTION_RANDOM = 0,
  QP_SELECTION_SEQUENTIAL = 1,
  QP_SELECTION_GREEDY_IMPACT = 2,
} QpSelection;

typedef enum QpBoundMethod {
  QP_BOUND_METHOD_AUTO = 0,
  QP_BOUND_METHOD_EXHAUSTIVE = 1,
  QP_BOUND_METHOD_HEURISTIC = 2,
  QP_BOUND_METHOD_HEURISTIC_ROOF_DUAL = 3,
} QpBoundMethod;

/**
 * Opaque instance handle.
 */
typedef struct QpQubo QpQubo;

typedef struct QpDiffStats {
  double min_diff;
  double max_diff;
  double dr_bits;
  size_t distinct_values;
  bool degenerate;
} QpDiffStats;

typedef struct QpSpectralGap {
  double y1;
  double y2;
  double gamma;
  double alpha_star;
} QpSpectralGap;

typedef struct QpCompressOptions {
  enum QpHeuristic heuristic;
  enum QpSelection selection;
  enum QpBoundMethod bound_method;
  size_t max_iterations;
  uint64_t seed;
} QpCompressOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *qp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qp_version(void);

/**
 * All-zero instance with `n` variables.
 *
 * # Safety
 * `out_q` must be a valid pointer to writable storage for one handle.
 */
enum QpStatus qp_qubo_new(size_t n, struct QpQubo **out_q);

/**
 * Instance from an `n * n` row-major matrix; entries below the diagonal
 * must be zero.
 *
 * # Safety
 * `values` must point to `n * n` readable doubles; `out_q` as in
 * [`qp_qubo_new`].
 */
enum QpStatus qp_qubo_from_dense(size_t n, const double *values, struct QpQubo **out_q);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `q` must be NULL or a handle from this library that was not freed yet.
 */
void qp_qubo_free(struct QpQubo *q);

/**
 * # Safety
 * `q` must be a live handle and `n` writable.
 */
enum QpStatus qp_qubo_dim(const struct QpQubo *q, size_t *n);

/**
 * Sets the upper-triangle entry `(i, j)`, `i <= j`.
 *
 * # Safety
 * `q` must be a live handle.
 */
enum QpStatus qp_qubo_set(struct QpQubo *q, size_t i, size_t j, double value);

/**
 * # Safety
 * `q` must be a live handle and `value` writable.
 */
enum QpStatus qp_qubo_get(const struct QpQubo *q, size_t i, size_t j, double *value);

/**
 * Energy of the bit vector `x` of length `len` (entries 0 or 1).
 *
 * # Safety
 * `x` must point to `len` readable bytes; `energy` must be writable.
 */
enum QpStatus qp_qubo_energy(const struct QpQubo *q, const uint8_t *x, size_t len, double *energy);

/**
 * # Safety
 * `q` must be a live handle and `stats` writable.
 */
enum QpStatus qp_qubo_diff_stats(const struct QpQubo *q, struct QpDiffStats *stats);

/**
 * Exact minimum by enumeration. Minimizers are written as bit masks
 * (bit `i` is `x_i`) into `masks`, at most `capacity` of them; `count`
 * receives the total number. A short buffer yields
 * `QP_STATUS_BUFFER_TOO_SMALL` with `min_value` and `count` still set.
 *
 * # Safety
 * `masks` must hold `capacity` writable values (it may be NULL when
 * `capacity` is 0); `min_value` and `count` must be writable.
 */
enum QpStatus qp_qubo_solve(const struct QpQubo *q,
                            double *min_value,
                            uint64_t *masks,
                            size_t capacity,
                            size_t *count);

/**
 * # Safety
 * `q` must be a live handle and `gap` writable.
 */
enum QpStatus qp_qubo_spectral_gap(const struct QpQubo *q, struct QpSpectralGap *gap);

/**
 * Whether every global minimizer of `reference` minimizes `candidate`.
 *
 * # Safety
 * Both handles must be live and `included` writable.
 */
enum QpStatus qp_optimum_included(const struct QpQubo *candidate,
                                  const struct QpQubo *reference,
                                  bool *included);

/**
 * Reads a text or JSON (`.json`) instance file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out_q` as in [`qp_qubo_new`].
 */
enum QpStatus qp_qubo_read(const char *path, struct QpQubo **out_q);

/**
 * # Safety
 * `q` must be a live handle and `path` a NUL-terminated string.
 */
enum QpStatus qp_qubo_write(const struct QpQubo *q, const char *path);

/**
 * Options matching the library defaults: `G0`, random selection, automatic
 * bounds, 1000 iterations, seed 0.
 */
struct QpCompressOptions qp_compress_options_default(void);

/**
 * Compresses `q` into a new handle; `q` is left untouched. `final_dr` may be
 * NULL.
 *
 * # Safety
 * `q` must be a live handle, `options` readable (NULL selects the
 * defaults), `out_q` as in [`qp_qubo_new`].
 */
enum QpStatus qp_compress(const struct QpQubo *q,
                          const struct QpCompressOptions *options,
                          struct QpQubo **out_q,
                          double *final_dr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUBOPRESS_H */
