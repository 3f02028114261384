#ifndef GSD_FFI_H
#define GSD_FFI_H

/* Generated by cbindgen from the gsd-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum GsdStatus {
  GSD_STATUS_OK = 0,
  // A required pointer argument was null.
  GSD_STATUS_NULL_POINTER = 1,
  // An argument was outside its domain (parameter range, empty counts,
  // zero replicates, subsample not smaller than the sample).
  GSD_STATUS_INVALID_ARGUMENT = 2,
  // A string argument was not valid UTF-8.
  GSD_STATUS_INVALID_UTF8 = 3,
} GsdStatus;

// Model selector mirroring the core enum.
typedef enum GsdModel {
  GSD_MODEL_GSD = 0,
  GSD_MODEL_PROBIT = 1,
  GSD_MODEL_SLI = 2,
} GsdModel;

// Comparison verdict.
typedef enum GsdVerdict {
  GSD_VERDICT_MODEL_BETTER = 0,
  GSD_VERDICT_EMPIRICAL_BETTER = 1,
  GSD_VERDICT_NO_SIGNIFICANT_DIFFERENCE = 2,
} GsdVerdict;

// Opaque handle owning the precomputed GSD fitting grid.
typedef struct GsdContext GsdContext;

// GSD fit output.
typedef struct GsdFitGsdResult {
  double psi;
  double rho;
  double log_likelihood;
  double pmf[5];
} GsdFitGsdResult;

// Ordered Probit fit output.
typedef struct GsdFitProbitResult {
  double mu;
  double sigma;
  double log_likelihood;
  double pmf[5];
} GsdFitProbitResult;

// Simplified Li2020 fit output.
typedef struct GsdFitSliResult {
  double mos;
  double s2;
  double sigma_eff;
  double log_likelihood;
  double pmf[5];
} GsdFitSliResult;

// Bootstrapped G-test output.
typedef struct GsdGofResult {
  double t_statistic;
  double p_value;
} GsdGofResult;

// Bootstrapping effectiveness test output.
typedef struct GsdComparisonResult {
  double p_m_hat;
  double p_e_hat;
  double diff;
  double ci_low;
  double ci_high;
  enum GsdVerdict verdict;
  uint64_t w_positive;
  uint64_t w_negative;
  uint64_t w_zero;
  uint64_t w_infinite;
} GsdComparisonResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create a context. Free with [`gsd_context_free`].
struct GsdContext *gsd_context_new(void);

// Free a context created by [`gsd_context_new`]. Null is a no-op.
//
// # Safety
// `ctx` must be a pointer previously returned by [`gsd_context_new`] that
// has not been freed yet.
void gsd_context_free(struct GsdContext *ctx);

// Human-readable message for a status code. The returned pointer is static.
const char *gsd_status_message(enum GsdStatus status);

// GSD probability mass function. Writes five probabilities to `out`.
//
// # Safety
// `out` must point to an array of at least five doubles.
enum GsdStatus gsd_pmf_eval(double psi, double rho, double *out);

// Variance bounds and branch cutoff for a GSD mean.
//
// # Safety
// `v_min`, `v_max` and `c_cutoff` must be valid writable pointers.
enum GsdStatus gsd_variance_bounds(double psi, double *v_min, double *v_max, double *c_cutoff);

// Discretized-censored normal PMF on the 5-level scale.
//
// # Safety
// `out` must point to an array of at least five doubles.
enum GsdStatus gsd_discretized_normal_pmf(double mu, double sigma, double *out);

// Constrained maximum-likelihood GSD fit.
//
// # Safety
// `ctx` must be a live context, `counts` an array of five category counts,
// `out` a valid writable pointer.
enum GsdStatus gsd_fit_gsd(const struct GsdContext *ctx,
                           const uint64_t *counts,
                           struct GsdFitGsdResult *out);

// Maximum-likelihood Ordered Probit fit over the bounded search box.
//
// # Safety
// `counts` must be an array of five category counts, `out` a valid writable
// pointer.
enum GsdStatus gsd_fit_probit(const uint64_t *counts, struct GsdFitProbitResult *out);

// Simplified Li2020 fit (moment matching with the floored deviation).
//
// # Safety
// `counts` must be an array of five category counts, `out` a valid writable
// pointer.
enum GsdStatus gsd_fit_sli(const uint64_t *counts, struct GsdFitSliResult *out);

// Bootstrapped G-test of goodness-of-fit. Deterministic in
// `(counts, model, mc, seed, stimulus_id)`.
//
// # Safety
// `ctx` must be a live context, `counts` an array of five category counts,
// `stimulus_id` a NUL-terminated string, `out` a valid writable pointer.
enum GsdStatus gsd_bootstrap_gof(const struct GsdContext *ctx,
                                 const uint64_t *counts,
                                 enum GsdModel model,
                                 uint32_t mc,
                                 uint64_t seed,
                                 const char *stimulus_id,
                                 struct GsdGofResult *out);

// Bootstrapping effectiveness test of a model (gsd or sli) against the
// empirical distribution.
//
// # Safety
// `ctx` must be a live context, `large` an array of five category counts,
// `stimulus_id` a NUL-terminated string, `out` a valid writable pointer.
enum GsdStatus gsd_compare_vs_empirical(const struct GsdContext *ctx,
                                        const uint64_t *large,
                                        uint64_t n_small,
                                        enum GsdModel model,
                                        uint32_t mc,
                                        uint64_t seed,
                                        const char *stimulus_id,
                                        struct GsdComparisonResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GSD_FFI_H */
