#ifndef CONEVOL_H
#define CONEVOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ConevolStatus {
  CONEVOL_STATUS_OK = 0,
  CONEVOL_STATUS_NULL_POINTER = 1,
  CONEVOL_STATUS_DOMAIN_ERROR = 2,
  CONEVOL_STATUS_CONVERGENCE_ERROR = 3,
  /**
   * The result was filled with the best available estimate.
   */
  CONEVOL_STATUS_QUADRATURE_ERROR = 4,
  /**
   * Series hit its term cap; the result is still filled.
   */
  CONEVOL_STATUS_TRUNCATION_WARNING = 5,
  CONEVOL_STATUS_INDEX_OUT_OF_RANGE = 6,
  CONEVOL_STATUS_PANIC = 7,
} ConevolStatus;

typedef enum ConevolProblem {
  CONEVOL_PROBLEM_CONE_CYLINDER = 0,
  CONEVOL_PROBLEM_CONE_SPHERE = 1,
} ConevolProblem;

typedef enum ConevolMethod {
  CONEVOL_METHOD_CLOSED_FORM = 0,
  CONEVOL_METHOD_QUAD_R3 = 1,
  CONEVOL_METHOD_QUAD_REDUCED = 2,
  CONEVOL_METHOD_SERIES = 3,
  CONEVOL_METHOD_SEMI_ANALYTIC = 4,
  CONEVOL_METHOD_QUAD2D = 5,
  CONEVOL_METHOD_MONTE_CARLO = 6,
  CONEVOL_METHOD_ZEROTH_APPROX = 7,
} ConevolMethod;

/**
 * Opaque series evaluation.
 */
typedef struct ConevolSeries ConevolSeries;

typedef struct ConevolOptions {
  double tol;
  size_t terms;
  uint64_t samples;
  uint64_t seed;
} ConevolOptions;

typedef struct ConevolVolume {
  double volume;
  double error_estimate;
  /**
   * Integrand evaluations, or samples for Monte Carlo.
   */
  uint64_t evaluations;
  enum ConevolMethod method;
} ConevolVolume;

typedef struct ConevolMcEstimate {
  double mean;
  double std_error;
  uint64_t samples;
  uint64_t seed;
  double bounding_volume;
} ConevolMcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *conevol_version(void);

/**
 * Static description of a status code.
 */
const char *conevol_status_message(enum ConevolStatus status);

/**
 * Detailed message for the last failing call on this thread, or NULL.
 * The pointer stays valid until the next `conevol_*` call on the same thread.
 */
const char *conevol_last_error_message(void);

struct ConevolOptions conevol_default_options(void);

/**
 * Complete elliptic integral of the first kind at modulus `k ∈ [0, 1)`.
 *
 * # Safety
 * `out` must be NULL or point to a writable `double`.
 */
enum ConevolStatus conevol_complete_k(double k, double *out);

/**
 * Complete elliptic integral of the second kind at modulus `k ∈ [0, 1]`.
 *
 * # Safety
 * `out` must be NULL or point to a writable `double`.
 */
enum ConevolStatus conevol_complete_e(double k, double *out);

/**
 * `∫₀^(π/2) sin²φ √(1 − k² sin²φ) dφ`.
 *
 * # Safety
 * `out` must be NULL or point to a writable `double`.
 */
enum ConevolStatus conevol_e2(double k, double *out);

/**
 * Evaluates one volume. `options` may be NULL for defaults.
 *
 * On `QUADRATURE_ERROR` and `TRUNCATION_WARNING` the output still holds the
 * best available estimate.
 *
 * # Safety
 * `options` must be NULL or point to a valid `ConevolOptions`; `out` must be
 * NULL or point to a writable `ConevolVolume`.
 */
enum ConevolStatus conevol_volume(enum ConevolProblem problem,
                                  enum ConevolMethod method,
                                  double k,
                                  double alpha,
                                  const struct ConevolOptions *options,
                                  struct ConevolVolume *out);

/**
 * Hit-or-miss Monte Carlo over the problem's canonical bounding box.
 *
 * # Safety
 * `out` must be NULL or point to a writable `ConevolMcEstimate`.
 */
enum ConevolStatus conevol_mc_volume(enum ConevolProblem problem,
                                     double k,
                                     double alpha,
                                     uint64_t samples,
                                     uint64_t seed,
                                     struct ConevolMcEstimate *out);

/**
 * Sums the cone/sphere series and returns a handle to the per-term record.
 * `*out` receives the handle even on `TRUNCATION_WARNING`; on any other
 * failure it is set to NULL.
 *
 * # Safety
 * `out` must be NULL or point to a writable `ConevolSeries*`.
 */
enum ConevolStatus conevol_series_new(double k,
                                      double alpha,
                                      double term_tol,
                                      size_t n_max,
                                      struct ConevolSeries **out);

/**
 * Releases a handle from [`conevol_series_new`]. NULL is ignored.
 *
 * # Safety
 * `series` must be NULL or a live handle not yet freed.
 */
void conevol_series_free(struct ConevolSeries *series);

/**
 * Number of terms summed; 0 for NULL.
 *
 * # Safety
 * `series` must be NULL or a live handle.
 */
size_t conevol_series_len(const struct ConevolSeries *series);

/**
 * Whether the term cap was reached before the tolerance; false for NULL.
 *
 * # Safety
 * `series` must be NULL or a live handle.
 */
bool conevol_series_truncated(const struct ConevolSeries *series);

/**
 * Value of term `index`.
 *
 * # Safety
 * `series` must be NULL or a live handle; `out` NULL or writable.
 */
enum ConevolStatus conevol_series_term(const struct ConevolSeries *series,
                                       size_t index,
                                       double *out);

/**
 * Sum of terms `0..=index`.
 *
 * # Safety
 * `series` must be NULL or a live handle; `out` NULL or writable.
 */
enum ConevolStatus conevol_series_partial_sum(const struct ConevolSeries *series,
                                              size_t index,
                                              double *out);

/**
 * Summed volume with its error estimate.
 *
 * # Safety
 * `series` must be NULL or a live handle; `out` NULL or writable.
 */
enum ConevolStatus conevol_series_volume(const struct ConevolSeries *series,
                                         struct ConevolVolume *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONEVOL_H */
