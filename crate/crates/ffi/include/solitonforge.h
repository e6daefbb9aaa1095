#ifndef SOLITONFORGE_H
#define SOLITONFORGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  /**
   * Seed terms `e^{−iL}`.
   */
  SF_CONVENTION_HALF_PHASE = 0,
  /**
   * Seed terms `e^{−2iL}`.
   */
  SF_CONVENTION_FULL_PHASE = 1,
} SfConvention;

typedef enum {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The construction degenerates at the requested point.
   */
  SF_STATUS_SINGULAR = 3,
  SF_STATUS_NUMERICAL_FAILURE = 4,
  SF_STATUS_PANIC = 5,
} SfStatus;

/**
 * σ₂ solution built from an odd exponential sum.
 */
typedef struct SfSigma2 SfSigma2;

/**
 * σ₁-constrained n-soliton on the zero background.
 */
typedef struct SfSoliton SfSoliton;

typedef struct {
  double re;
  double im;
} SfComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sf_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * Builds an n-soliton from `n` pairs `(lambdas[k], alphas[k])`; each pair is
 * completed by its conjugate partner.
 *
 * # Safety
 * `lambdas` and `alphas` must hold `n` values; `out` must be writable.
 */
SfStatus sf_soliton_new(const SfComplex *lambdas,
                        const SfComplex *alphas,
                        size_t n,
                        SfSoliton **out);

/**
 * `(u, v)` at `(x, t)`; `v = u*` for these solutions.
 *
 * # Safety
 * `h` must come from [`sf_soliton_new`]; `u` and `v` must be writable.
 */
SfStatus sf_soliton_eval(const SfSoliton *h, double x, double t, SfComplex *u, SfComplex *v);

/**
 * Largest of the CNL and coupled-system residuals at `(x, t)`.
 *
 * # Safety
 * `h` must come from [`sf_soliton_new`]; `out` must be writable.
 */
SfStatus sf_soliton_residual(const SfSoliton *h, double x, double t, double *out);

/**
 * # Safety
 * `h` must be null or come from [`sf_soliton_new`] and not be used afterwards.
 */
void sf_soliton_free(SfSoliton *h);

/**
 * Builds a σ₂ solution from `count = 2n + 1` values of λ (real or in
 * conjugate pairs). `free[k]` fixes the phase of `c_k` for real λ and `c_k`
 * itself for `Im λ > 0`; the remaining moduli follow from the constraints.
 *
 * # Safety
 * `lambdas` and `free` must hold `count` values; `out` must be writable.
 */
SfStatus sf_sigma2_new(const SfComplex *lambdas,
                       const SfComplex *free,
                       size_t count,
                       SfConvention convention,
                       SfSigma2 **out);

/**
 * `(u, v)` at `(x, t)`, with `|v| = 1`.
 *
 * # Safety
 * `h` must come from [`sf_sigma2_new`]; `u` and `v` must be writable.
 */
SfStatus sf_sigma2_eval(const SfSigma2 *h, double x, double t, SfComplex *u, SfComplex *v);

/**
 * Largest phase-equation residual at `(x, t)`.
 *
 * # Safety
 * `h` must come from [`sf_sigma2_new`]; `out` must be writable.
 */
SfStatus sf_sigma2_residual(const SfSigma2 *h, double x, double t, double *out);

/**
 * # Safety
 * `h` must be null or come from [`sf_sigma2_new`] and not be used afterwards.
 */
void sf_sigma2_free(SfSigma2 *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOLITONFORGE_H */
