#ifndef LEGENDRE_INDEX_H
#define LEGENDRE_INDEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Interpolation rule of a tabulated function.
typedef enum LiInterpolation {
  LI_INTERPOLATION_LINEAR = 0,
  LI_INTERPOLATION_CUBIC = 1,
} LiInterpolation;

// Route used by [`li_kernel`].
typedef enum LiKernelMethod {
  LI_KERNEL_METHOD_DIRECT = 0,
  LI_KERNEL_METHOD_MELLIN_BARNES = 1,
  LI_KERNEL_METHOD_FOURIER_COSINE = 2,
} LiKernelMethod;

// Outcome of a call.
typedef enum LiStatus {
  LI_STATUS_OK = 0,
  LI_STATUS_NULL_POINTER = 1,
  LI_STATUS_INVALID_PARAMETER = 2,
  LI_STATUS_DOMAIN = 3,
  LI_STATUS_POLE = 4,
  LI_STATUS_NON_CONVERGENCE = 5,
  LI_STATUS_NON_FINITE = 6,
  LI_STATUS_TAIL_BOUND = 7,
  LI_STATUS_CAPABILITY = 8,
  LI_STATUS_PANIC = 9,
} LiStatus;

// An input function: a builtin or a tabulated one.
typedef struct LiFunction LiFunction;

// Transform parameters (the order μ).
typedef struct LiParams LiParams;

// A wedge boundary value problem.
typedef struct LiWedge LiWedge;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *li_version(void);

// Static description of a status code.
const char *li_status_message(enum LiStatus status);

// Copies the last error message of this thread into `buf` (at most
// `len − 1` bytes plus a NUL) and returns its full length in bytes. An
// empty message means the last call succeeded.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t li_last_error_message(char *buf, size_t len);

// Creates transform parameters for order `mu < 1/2`.
//
// # Safety
// `out` must be null or valid for writing one pointer.
enum LiStatus li_params_new(double mu, struct LiParams **out);

// # Safety
// `p` must be null or a handle from [`li_params_new`] not yet freed.
void li_params_free(struct LiParams *p);

// Parses a builtin function such as `exp_decay(a=1)`.
//
// # Safety
// `spec` must be null or a NUL-terminated string; `out` must be null or
// valid for writing one pointer.
enum LiStatus li_function_parse(const char *spec, struct LiFunction **out);

// Builds a tabulated function from `n` strictly ascending abscissas.
//
// # Safety
// `xs` and `ys` must point to `n` readable values; `out` must be null or
// valid for writing one pointer.
enum LiStatus li_function_from_table(const double *xs,
                                     const double *ys,
                                     size_t n,
                                     enum LiInterpolation interpolation,
                                     struct LiFunction **out);

// The function's value at `x`.
//
// # Safety
// `f` must be a live handle; `out` must be valid for writing.
enum LiStatus li_function_eval(const struct LiFunction *f, double x, double *out);

// # Safety
// `f` must be null or a handle not yet freed.
void li_function_free(struct LiFunction *f);

// The kernel Φ(x, τ) by the chosen route. `err` may be null.
//
// # Safety
// `p` must be a live handle; `value` must be valid for writing; `err` must
// be null or valid for writing.
enum LiStatus li_kernel(const struct LiParams *p,
                        enum LiKernelMethod method,
                        double x,
                        double tau,
                        double *value,
                        double *err);

// `F(τ)` on `n` points; `errs` may be null.
//
// # Safety
// `f` and `p` must be live handles; `taus` must hold `n` values and
// `values` (and `errs` when non-null) room for `n`.
enum LiStatus li_forward_f(const struct LiFunction *f,
                           const struct LiParams *p,
                           const double *taus,
                           size_t n,
                           double *values,
                           double *errs);

// `G(x)` on `n` points; `errs` may be null.
//
// # Safety
// As for [`li_forward_f`].
enum LiStatus li_forward_g(const struct LiFunction *g,
                           const struct LiParams *p,
                           const double *xs,
                           size_t n,
                           double *values,
                           double *errs);

// Samples `G g` on the default log grid and reconstructs `g` at `n`
// points: the limit form when `epsilon ≤ 0`, the regularised form at
// `epsilon ∈ (0, 1)` otherwise.
//
// # Safety
// As for [`li_forward_f`].
enum LiStatus li_reconstruct_g(const struct LiFunction *g,
                               const struct LiParams *p,
                               double epsilon,
                               const double *taus,
                               size_t n,
                               double *values,
                               double *errs);

// A wedge problem of opening `beta` with boundary data `g` at θ = β.
// The handle keeps its own copies of `p` and `g`.
//
// # Safety
// `p` and `g` must be live handles; `out` must be null or valid for
// writing one pointer.
enum LiStatus li_wedge_new(double beta,
                           const struct LiParams *p,
                           const struct LiFunction *g,
                           struct LiWedge **out);

// The solution u(r, θ).
//
// # Safety
// `w` must be a live handle; `out` must be valid for writing.
enum LiStatus li_wedge_solution(const struct LiWedge *w, double r, double theta, double *out);

// # Safety
// `w` must be null or a handle not yet freed.
void li_wedge_free(struct LiWedge *w);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEGENDRE_INDEX_H */
