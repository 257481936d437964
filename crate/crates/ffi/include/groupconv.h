#ifndef GROUPCONV_H
#define GROUPCONV_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status returned by every fallible entry point.
 */
typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_POINTER = 1,
  GC_STATUS_INVALID_UTF8 = 2,
  GC_STATUS_PANIC = 3,
  GC_STATUS_INVALID_ORDER = 10,
  GC_STATUS_INVALID_INPUT = 11,
  GC_STATUS_GROUP_AXIOM = 12,
  GC_STATUS_INDEX_OUT_OF_RANGE = 13,
  GC_STATUS_IRREPS_UNAVAILABLE = 14,
  GC_STATUS_SHAPE = 15,
  GC_STATUS_INCOMPATIBLE_SIGNAL = 16,
  GC_STATUS_DEGENERATE_FILTER = 17,
  GC_STATUS_PRECONDITION = 18,
  GC_STATUS_ZERO_OUTPUT = 19,
  GC_STATUS_SINGULAR_OPERATION = 20,
  GC_STATUS_DOMAIN = 21,
  GC_STATUS_NORMALIZATION = 22,
  GC_STATUS_ILL_CONDITIONED = 23,
  GC_STATUS_PARSE = 24,
  GC_STATUS_IO = 25,
} GcStatus;

typedef enum GcVariant {
  GC_VARIANT_CONVOLUTION = 0,
  GC_VARIANT_RIGHT_CONVOLUTION = 1,
  GC_VARIANT_CROSS_CORRELATION = 2,
  GC_VARIANT_RIGHT_CROSS_CORRELATION = 3,
} GcVariant;

typedef enum GcEncoding {
  GC_ENCODING_LCU = 0,
  GC_ENCODING_FOURIER = 1,
} GcEncoding;

/**
 * Opaque finite group.
 */
typedef struct GcGroup GcGroup;

typedef struct GcComplex {
  double re;
  double im;
} GcComplex;

typedef struct GcCondition {
  double kappa;
  double norm;
  double sigma_min;
} GcCondition;

typedef struct GcSvtReport {
  double alpha;
  double kappa;
  size_t degree;
  double success_probability;
  double worst_case_probability;
} GcSvtReport;

typedef struct GcStudyRow {
  size_t n;
  double error;
  double kappa_measured;
  double kappa_bound;
} GcStudyRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gc_version(void);

/**
 * Builds a group from a spec such as `cyclic:8`, `dihedral:4` or
 * `product:cyclic:2,cyclic:3`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a writable pointer.
 */
enum GcStatus gc_group_new(const char *spec, struct GcGroup **out);

/**
 * # Safety
 * `group` must come from `gc_group_new` and not be freed twice. NULL is a no-op.
 */
void gc_group_free(struct GcGroup *group);

/**
 * Order of the group, or 0 for NULL.
 *
 * # Safety
 * `group` must be NULL or a live handle.
 */
size_t gc_group_order(const struct GcGroup *group);

/**
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
enum GcStatus gc_group_multiply(const struct GcGroup *group, size_t a, size_t b, size_t *out);

/**
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
enum GcStatus gc_group_inverse(const struct GcGroup *group, size_t a, size_t *out);

/**
 * Writes `m ⊛ x` (or the chosen variant) to `out`. All arrays have `len`
 * entries, which must equal the group order.
 *
 * # Safety
 * Pointers must reference `len` valid elements.
 */
enum GcStatus gc_convolve(const struct GcGroup *group,
                          enum GcVariant variant,
                          const struct GcComplex *filter,
                          const struct GcComplex *input,
                          size_t len,
                          struct GcComplex *out);

/**
 * Condition data of the operation matrix, computed per irrep.
 *
 * # Safety
 * `filter` must reference `len` elements and `out` be writable.
 */
enum GcStatus gc_condition(const struct GcGroup *group,
                           enum GcVariant variant,
                           const struct GcComplex *filter,
                           size_t len,
                           struct GcCondition *out);

/**
 * Solves `M x = y` exactly, writing the unnormalized solution.
 *
 * # Safety
 * Pointers must reference `len` valid elements.
 */
enum GcStatus gc_deconvolve_exact(const struct GcGroup *group,
                                  enum GcVariant variant,
                                  const struct GcComplex *filter,
                                  const struct GcComplex *output,
                                  size_t len,
                                  struct GcComplex *out);

/**
 * Singular-value-transformation deconvolution. Writes the unit state
 * proportional to `M⁻¹ y` and, if `report` is non-NULL, its bookkeeping.
 *
 * # Safety
 * Pointers must reference `len` valid elements; `report` may be NULL.
 */
enum GcStatus gc_deconvolve_svt(const struct GcGroup *group,
                                enum GcVariant variant,
                                const struct GcComplex *filter,
                                const struct GcComplex *output,
                                size_t len,
                                double epsilon,
                                enum GcEncoding encoding,
                                struct GcComplex *out,
                                struct GcSvtReport *report);

/**
 * Runs the periodic integral-equation convergence study on `[0,1]^dim`.
 * `rows` must hold `count` entries; `slope` receives the log-log slope.
 *
 * # Safety
 * `n_list` and `rows` must reference `count` elements; `slope` may be NULL.
 */
enum GcStatus gc_integral_study(const size_t *n_list,
                                size_t count,
                                size_t dim,
                                double lambda,
                                struct GcStudyRow *rows,
                                double *slope);

/**
 * Message of the most recent failure on this thread, or NULL.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *gc_last_error(void);

void gc_clear_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROUPCONV_H */
