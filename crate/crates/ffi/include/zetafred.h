/* C interface to the zetafred determinant library. */

#ifndef ZETAFRED_H
#define ZETAFRED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  ZF_STATUS_OK = 0,
  ZF_STATUS_INVALID_ARGUMENT = 1,
  ZF_STATUS_NUMERIC_ERROR = 2,
  ZF_STATUS_VERIFICATION_FAILED = 3,
  ZF_STATUS_PARSE_ERROR = 4,
} ZfStatus;

/**
 * Opaque handle to a spectrum model.
 */
typedef struct ZfModel ZfModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message (UTF-8, NUL-terminated) into `buf` and
 * returns the full message length in bytes (excluding the NUL). A zero
 * return means no error has been recorded on this thread.
 *
 * # Safety
 * `buf` must point to at least `cap` writable bytes, or be NULL (then only
 * the length is returned).
 */
uintptr_t zf_last_error(char *buf, uintptr_t cap);

/**
 * Returns a handle to a built-in model ("N1", "N2", "HO"), or NULL.
 *
 * # Safety
 * `name` must be a NUL-terminated string.
 */
ZfModel *zf_model_builtin(const char *name);

/**
 * Builds a model from its JSON description; NULL on parse or invariant
 * failure (see zf_last_error).
 *
 * # Safety
 * `json` must be a NUL-terminated string.
 */
ZfModel *zf_model_from_json(const char *json);

/**
 * Frees a model handle. NULL is a no-op.
 *
 * # Safety
 * `model` must come from zf_model_builtin/zf_model_from_json and not have
 * been freed already.
 */
void zf_model_free(ZfModel *model);

/**
 * Schatten order p of the model; 0 for NULL input.
 *
 * # Safety
 * `model` must be a live handle or NULL.
 */
uint32_t zf_model_schatten_order(const ZfModel *model);

/**
 * Copies the model name into `buf` (NUL-terminated, truncating) and
 * returns the name length in bytes.
 *
 * # Safety
 * `model` must be a live handle; `buf` must point to `cap` writable bytes
 * or be NULL.
 */
uintptr_t zf_model_name(const ZfModel *model, char *buf, uintptr_t cap);

/**
 * tr e^{-tL} at t > 0 to absolute tolerance `tol`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable or NULL.
 */
ZfStatus zf_heat_trace(const ZfModel *model, double t, double tol, double *out);

/**
 * log det_ζ(L); the dual-route residual is reported through `out_residual`
 * when non-NULL.
 *
 * # Safety
 * `model` must be a live handle; out pointers must be writable or NULL.
 */
ZfStatus zf_log_det_zeta(const ZfModel *model, double *out, double *out_residual);

/**
 * log det_ζ(L + z) for Re z > -λ_1.
 *
 * # Safety
 * `model` must be a live handle; out pointers must be writable or NULL.
 */
ZfStatus zf_log_det_zeta_shifted(const ZfModel *model,
                                 double z_re,
                                 double z_im,
                                 double *out_re,
                                 double *out_im);

/**
 * ζ(s; L) at a regular point; a pole of ζ yields NumericError with the
 * Laurent data described in the error message.
 *
 * # Safety
 * `model` must be a live handle; out pointers must be writable or NULL.
 */
ZfStatus zf_zeta(const ZfModel *model, double s_re, double s_im, double *out_re, double *out_im);

/**
 * log det_order(I + z·L^{-1}); `out_tail_bound` gets the truncation bound.
 * A zero of the determinant (z on the negated spectrum) is reported as
 * VerificationFailed with -inf written to the log.
 *
 * # Safety
 * `model` must be a live handle; out pointers must be writable or NULL.
 */
ZfStatus zf_fredholm_log_det(const ZfModel *model,
                             double z_re,
                             double z_im,
                             uint32_t order,
                             double *out_re,
                             double *out_im,
                             double *out_tail_bound);

/**
 * tr (L+z)^{-N} for N ≥ p.
 *
 * # Safety
 * `model` must be a live handle; out pointers must be writable or NULL.
 */
ZfStatus zf_resolvent_power_trace(const ZfModel *model,
                                  double z_re,
                                  double z_im,
                                  uint32_t n,
                                  double *out_re,
                                  double *out_im);

/**
 * Runs the determinant-identity verification on the default z grid.
 * Returns Ok when it passes, VerificationFailed when the residual exceeds
 * the tolerance; `out_max_residual` gets the largest residual either way.
 *
 * # Safety
 * `model` must be a live handle; `out_max_residual` must be writable or NULL.
 */
ZfStatus zf_verify_main_theorem(const ZfModel *model, double *out_max_residual);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZETAFRED_H */
