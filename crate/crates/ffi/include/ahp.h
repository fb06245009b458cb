#ifndef AHP_H
#define AHP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AhpMethod {
  AHP_METHOD_EIGENVECTOR = 0,
  AHP_METHOD_ROWSUM = 1,
} AhpMethod;

typedef enum AhpStatus {
  AHP_STATUS_OK = 0,
  AHP_STATUS_NULL_POINTER = 1,
  AHP_STATUS_PARSE = 2,
  AHP_STATUS_DOMAIN = 3,
  AHP_STATUS_NON_CONVERGENCE = 4,
  AHP_STATUS_UNSUPPORTED_ORDER = 5,
  AHP_STATUS_BUFFER_TOO_SMALL = 6,
  AHP_STATUS_INTERNAL = 99,
} AhpStatus;

/**
 * Opaque comparison matrix.
 */
typedef struct AhpMatrix AhpMatrix;

typedef struct AhpConsistency {
  size_t order;
  double lambda_max;
  double ci;
  double ri;
  double cr;
  bool consistent;
} AhpConsistency;

typedef struct AhpTestResult {
  double statistic;
  double df1;
  double df2;
  double p_value;
  bool degenerate;
} AhpTestResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds an `n`x`n` matrix from its strict upper triangle, row-major
 * (`n(n-1)/2` values: (0,1), (0,2), ..., (n-2,n-1)). Items are labeled C1..Cn.
 *
 * # Safety
 * `upper` must point to `n(n-1)/2` doubles (may be null when `n < 2`);
 * `out` must be a valid pointer.
 */
enum AhpStatus ahp_matrix_from_upper(size_t n, const double *upper, struct AhpMatrix **out);

/**
 * Parses a matrix CSV held in memory.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be a valid pointer.
 */
enum AhpStatus ahp_matrix_parse_csv(const uint8_t *data, size_t len, struct AhpMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle returned by this library, not yet freed.
 */
void ahp_matrix_free(struct AhpMatrix *m);

/**
 * Order of the matrix, 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t ahp_matrix_order(const struct AhpMatrix *m);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum AhpStatus ahp_matrix_get(const struct AhpMatrix *m, size_t i, size_t j, double *out);

/**
 * Writes the normalized weights into `out[0..order]`.
 *
 * # Safety
 * `m` must be a live handle; `out` must point to `len` writable doubles.
 */
enum AhpStatus ahp_weights(const struct AhpMatrix *m,
                           enum AhpMethod method,
                           double *out,
                           size_t len);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum AhpStatus ahp_consistency(const struct AhpMatrix *m, struct AhpConsistency *out);

/**
 * Tabulated random index for orders 1..=15.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AhpStatus ahp_random_index(size_t n, double *out);

/**
 * Monte Carlo random index on the 17-value scale; deterministic in `seed`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AhpStatus ahp_estimate_random_index(size_t n, size_t samples, uint64_t seed, double *out);

/**
 * Pooled two-sample t-test from group summaries.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AhpStatus ahp_t_test_from_summary(size_t n1,
                                       double mean1,
                                       double sd1,
                                       size_t n2,
                                       double mean2,
                                       double sd2,
                                       struct AhpTestResult *out);

/**
 * Significance of a Pearson correlation `r` over `n` pairs.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AhpStatus ahp_pearson_from_r(double r, size_t n, struct AhpTestResult *out);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *ahp_last_error_message(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* AHP_H */
