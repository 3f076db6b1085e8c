#ifndef PHASESPACE_H
#define PHASESPACE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Classification regions; mirrors the core taxonomy.
 */
typedef enum PsRegion {
  PsRegion_Separable = 0,
  PsRegion_Representational = 1,
  PsRegion_Hybrid = 2,
  PsRegion_Genuine = 3,
  PsRegion_Undetermined = 4,
} PsRegion;

/**
 * Call outcome.
 */
typedef enum PsStatus {
  PsStatus_Ok = 0,
  /**
   * A parameter failed validation (non-positive width, p outside [0,1], ...).
   */
  PsStatus_InvalidParameter = 1,
  /**
   * The requested kernel would exceed the dimension guard.
   */
  PsStatus_TooLarge = 2,
  /**
   * An eigensolver or other numeric routine failed.
   */
  PsStatus_NumericalFailure = 3,
  /**
   * A required pointer argument was null.
   */
  PsStatus_NullPointer = 4,
} PsStatus;

/**
 * Opaque handle to a discretized position-space kernel.
 */
typedef struct PsKernel PsKernel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * RS and PPT symplectic tests for the displaced-pair family at one
 * displacement. `rs_pass`/`ppt_pass` receive 0 or 1.
 *
 * # Safety
 * All out-pointers must be valid for writes (or null, in which case the call
 * fails with `NullPointer`).
 */
enum PsStatus ps_scan_point(double s_q,
                            double s_p,
                            double k_q,
                            double k_p,
                            double d,
                            double hbar,
                            double *nu_min,
                            double *nu_tilde_min,
                            int32_t *rs_pass,
                            int32_t *ppt_pass);

/**
 * Builds the discretized two-mode kernel for the displaced-pair family on an
 * `n` x `n` position lattice over `[lo, hi]^2`. `max_dim` caps the matrix
 * dimension (`n^2`); pass 0 for the built-in guard of 10000. On success the
 * handle must be released with `ps_kernel_free`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PsStatus ps_kernel_build(double s_q,
                              double s_p,
                              double k_q,
                              double k_p,
                              double d,
                              double hbar,
                              double lo,
                              double hi,
                              uintptr_t n,
                              uintptr_t max_dim,
                              struct PsKernel **out);

/**
 * Matrix dimension of a kernel handle; 0 if the handle is null.
 *
 * # Safety
 * `kernel` must be null or a handle from `ps_kernel_build`.
 */
uintptr_t ps_kernel_dim(const struct PsKernel *kernel);

/**
 * Smallest eigenvalue, trace, and positivity verdict (1 = positive within
 * tolerance) of a kernel handle.
 *
 * # Safety
 * `kernel` must be a handle from `ps_kernel_build`; out-pointers must be
 * valid for writes.
 */
enum PsStatus ps_kernel_min_eigenvalue(const struct PsKernel *kernel,
                                       double *lambda_min,
                                       double *trace,
                                       int32_t *positive);

/**
 * Releases a kernel handle; null is a no-op.
 *
 * # Safety
 * `kernel` must be null or a handle from `ps_kernel_build`, and must not be
 * used afterwards.
 */
void ps_kernel_free(struct PsKernel *kernel);

/**
 * Partial-transpose minimum eigenvalue and global Wigner minimum of the
 * beamsplitter benchmark at mixing weight `p`.
 *
 * # Safety
 * Out-pointers must be valid for writes.
 */
enum PsStatus ps_fock_point(double p, double hbar, double *lambda_min_pt, double *wigner_min);

/**
 * Classifies a diagnostics bundle. `has_operator`/`has_wigner` mark whether
 * the corresponding flag was measured; unmeasured flags can force
 * `Undetermined`.
 */
enum PsRegion ps_classify(int32_t rs_pass,
                          int32_t ppt_pass,
                          int32_t has_operator,
                          int32_t operator_positive,
                          int32_t has_wigner,
                          int32_t wigner_nonnegative);

/**
 * Stable NUL-terminated name for a region code.
 */
const char *ps_region_name(enum PsRegion region);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHASESPACE_H */
