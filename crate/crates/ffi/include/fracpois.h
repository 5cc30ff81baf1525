#ifndef FRACPOIS_H
#define FRACPOIS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values 2–4 match the exit codes of the `fracpois` binary.
 */
typedef enum FpStatus {
  FP_STATUS_OK = 0,
  FP_STATUS_INVALID_PARAMS = 2,
  FP_STATUS_CONVERGENCE = 3,
  FP_STATUS_UNSUPPORTED = 4,
  FP_STATUS_NULL_POINTER = 5,
  FP_STATUS_INDEX_OUT_OF_RANGE = 6,
  FP_STATUS_PANIC = 7,
} FpStatus;

typedef enum FpVariant {
  FP_VARIANT_CLASSICAL = 0,
  FP_VARIANT_TFPP = 1,
  FP_VARIANT_SFPP = 2,
  FP_VARIANT_STFPP = 3,
  FP_VARIANT_SSTFPP = 4,
} FpVariant;

/**
 * Opaque process parameters.
 */
typedef struct FpParams FpParams;

/**
 * Opaque pmf table.
 */
typedef struct FpPmfTable FpPmfTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *fp_last_error_message(void);

/**
 * Validates parameters and stores a new handle in `*out`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum FpStatus fp_params_new(enum FpVariant variant,
                            double lambda,
                            double alpha,
                            double nu,
                            double beta,
                            double gamma,
                            struct FpParams **out);

/**
 * Releases a handle from [`fp_params_new`]; null is ignored.
 *
 * # Safety
 * `params` must be null or an unreleased handle from this library.
 */
void fp_params_free(struct FpParams *params);

/**
 * `p(n, t)` with default series control.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for one write.
 */
enum FpStatus fp_pmf(const struct FpParams *params, double t, uint32_t n, double *out);

/**
 * Probability generating function `G(u, t)`, `|u| < 1`.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for one write.
 */
enum FpStatus fp_pgf(const struct FpParams *params, double u, double t, double *out);

/**
 * First waiting-time survival `Pr{X > t}`.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for one write.
 */
enum FpStatus fp_survival(const struct FpParams *params, double t, double *out);

/**
 * `Pr{N(t) > n_max}`.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for one write.
 */
enum FpStatus fp_tail_mass(const struct FpParams *params, double t, uint32_t n_max, double *out);

/**
 * Mittag-Leffler function `E_α(x)`, `0 < α ≤ 1`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum FpStatus fp_mittag_leffler(double alpha, double x, double *out);

/**
 * Computes `p(n, times[i])` for `n ≤ n_max` and stores a table handle.
 *
 * # Safety
 * `times` must point to `n_times` readable doubles (or be null with
 * `n_times == 0`), `params` must be a live handle and `out` valid for
 * writing one pointer.
 */
enum FpStatus fp_pmf_table_new(const struct FpParams *params,
                               const double *times,
                               size_t n_times,
                               uint32_t n_max,
                               struct FpPmfTable **out);

/**
 * Entry `p(n, times[time_index])` of a table.
 *
 * # Safety
 * `table` must be a live handle and `out` valid for one write.
 */
enum FpStatus fp_pmf_table_get(const struct FpPmfTable *table,
                               size_t time_index,
                               uint32_t n,
                               double *out);

/**
 * Tail mass above `n_max` at `times[time_index]`.
 *
 * # Safety
 * `table` must be a live handle and `out` valid for one write.
 */
enum FpStatus fp_pmf_table_tail(const struct FpPmfTable *table, size_t time_index, double *out);

/**
 * Releases a table handle; null is ignored.
 *
 * # Safety
 * `table` must be null or an unreleased handle from this library.
 */
void fp_pmf_table_free(struct FpPmfTable *table);

/**
 * Simulates `n_samples` draws at `t` and writes the histogram of
 * `0..=n_max` into `counts` (length `counts_len`, which must equal
 * `n_max + 1`) and the number of larger draws into `*overflow`.
 *
 * # Safety
 * `params` must be a live handle, `counts` valid for `counts_len` writes
 * and `overflow` valid for one write.
 */
enum FpStatus fp_empirical_pmf(const struct FpParams *params,
                               double t,
                               uint64_t n_samples,
                               uint32_t n_max,
                               uint64_t seed,
                               uint64_t *counts,
                               size_t counts_len,
                               uint64_t *overflow);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACPOIS_H */
