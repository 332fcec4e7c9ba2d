#ifndef MEANLAB_H
#define MEANLAB_H

/* Generated by cbindgen from meanlab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible FFI call.
typedef enum MlStatus {
  ML_STATUS_OK = 0,
  // Null pointer, unknown name, or numeric argument out of range.
  ML_STATUS_INVALID_ARGUMENT = 1,
  // Quadrature exhausted its budget without meeting the tolerance.
  ML_STATUS_NO_CONVERGENCE = 2,
  // The operation needs a capability the precision backend cannot offer.
  ML_STATUS_UNSUPPORTED = 3,
  // The caller's buffer is too small; retry with the reported size.
  ML_STATUS_BUFFER_TOO_SMALL = 4,
  ML_STATUS_IO = 5,
  // An internal invariant failed; the library state is still consistent.
  ML_STATUS_PANIC = 6,
} MlStatus;

// Opaque handle: quadrature tolerance plus escalated-evaluation precision.
typedef struct MlCtx MlCtx;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a context. `precision_digits == 0` selects the default
// (50 decimal digits); `tol_abs == tol_rel == 0` selects the default
// tolerance. Returns null on invalid input, with the detail available
// through [`ml_last_error`].
struct MlCtx *ml_ctx_new(uint32_t precision_digits, double tol_abs, double tol_rel);

// Frees a context returned by [`ml_ctx_new`]. Null is a no-op.
//
// # Safety
// `ctx` must be null or a pointer returned by [`ml_ctx_new`] that has not
// already been freed.
void ml_ctx_free(struct MlCtx *ctx);

// Library version as a static NUL-terminated string.
const char *ml_version(void);

// Static description of a status code.
const char *ml_strerror(enum MlStatus status);

// Copies the calling thread's most recent error message into `buf`,
// always NUL-terminated, truncating if necessary. Returns the full length
// of the message including the NUL; pass a null `buf` to query the size.
//
// # Safety
// `buf` must be null or valid for writing `len` bytes.
size_t ml_last_error(char *buf, size_t len);

// Evaluates a registered mean by name (`"A"`, `"G"`, `"H"`, `"C"`, `"r"`,
// `"g"`, `"Hn"`, `"AGhalf"`, `"min"`, `"max"`) at a positive pair.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be valid for writing.
enum MlStatus ml_mean(const char *name, double a, double b, double *out);

// Integral mean I_M over [a,b]²: exact or closed form for registered
// kinds, adaptive cubature otherwise.
//
// # Safety
// `ctx` must be null or a live context; `name` a NUL-terminated string;
// `out` valid for writing.
enum MlStatus ml_integral_mean(const struct MlCtx *ctx,
                               const char *name,
                               double a,
                               double b,
                               double *out);

// The affine companion J_M = 3 I_M − 2 A.
//
// # Safety
// Same contract as [`ml_integral_mean`].
enum MlStatus ml_j_mean(const struct MlCtx *ctx, const char *name, double a, double b, double *out);

// Trigonometric selector mean S_M with the default selector weights.
//
// # Safety
// Same contract as [`ml_integral_mean`].
enum MlStatus ml_s_mean(const struct MlCtx *ctx, const char *name, double a, double b, double *out);

// Composite mean T_{M1,M2}: averages `outer(M2(a,b), x)` for x over [a,b].
//
// # Safety
// `ctx` must be null or a live context; `outer` and `inner` must be
// NUL-terminated strings; `out` valid for writing.
enum MlStatus ml_t_mean(const struct MlCtx *ctx,
                        const char *outer,
                        const char *inner,
                        double a,
                        double b,
                        double *out);

// Evaluates a registered lab expression (`"N0"`, `"N(c)"`, `"L0"`,
// `"L(c)"`, `"JId"`, `"JTsin"`, `"JLnsq"`, or any mean name) in double
// precision.
//
// # Safety
// `expr` must be a NUL-terminated string; `out` valid for writing.
enum MlStatus ml_expr_eval(const char *expr, double a, double b, double *out);

// Evaluates a registered lab expression at the context's decimal precision
// and renders the full decimal expansion into `buf` (NUL terminated).
// `*needed` always receives the required size including the NUL; if `buf`
// is null or too small the call returns `BufferTooSmall` and writes
// nothing else.
//
// # Safety
// `ctx` must be null or a live context; `expr` a NUL-terminated string;
// `buf` null or valid for writing `buf_len` bytes; `needed` valid for
// writing.
enum MlStatus ml_expr_eval_decimal(const struct MlCtx *ctx,
                                   const char *expr,
                                   double a,
                                   double b,
                                   char *buf,
                                   size_t buf_len,
                                   size_t *needed);

// Runs a named inequality chain (`"classical"`, `"integral"`, `"s-means"`,
// `"t-means"`) over `samples` seeded pairs and reports the violation count.
// A nonzero count is a finding, not an error: the call still returns `Ok`.
//
// # Safety
// `ctx` must be null or a live context; `chain` a NUL-terminated string;
// `violations` valid for writing.
enum MlStatus ml_verify_chain(const struct MlCtx *ctx,
                              const char *chain,
                              uint64_t samples,
                              uint64_t seed,
                              uint64_t *violations);

// Searches the box `[a_lo,a_hi]×[b_lo,b_hi]` for a point where `lhs < rhs`,
// certifying any candidate at the context's precision. On return `*found`
// is 1 with the witness and the signed difference `lhs−rhs` filled in, or
// 0 with the out values zeroed. Exhausting the budget without a find is
// `Ok` with `*found == 0`.
//
// # Safety
// `ctx` must be null or a live context; `lhs` and `rhs` NUL-terminated
// strings; `found`, `witness_a`, `witness_b`, `difference` valid for
// writing.
enum MlStatus ml_scan(const struct MlCtx *ctx,
                      const char *lhs,
                      const char *rhs,
                      double a_lo,
                      double a_hi,
                      double b_lo,
                      double b_hi,
                      uint64_t budget,
                      int32_t *found,
                      double *witness_a,
                      double *witness_b,
                      double *difference);

// Checks the two-sided gamma sandwich through both the constant route and
// the mean route at the context's precision. `*holds` is 1 only if every
// strict inequality verifies.
//
// # Safety
// `ctx` must be null or a live context; `holds` valid for writing.
enum MlStatus ml_gamma_sandwich(const struct MlCtx *ctx, int32_t *holds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEANLAB_H */
