#ifndef SCHRO_H
#define SCHRO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Zero is success; the rest mirror the library error kinds.
 */
typedef enum SchroStatus {
  SCHRO_STATUS_OK = 0,
  SCHRO_STATUS_DIMENSION_MISMATCH = 10,
  SCHRO_STATUS_NOT_SQUARE = 11,
  SCHRO_STATUS_NOT_HERMITIAN = 12,
  SCHRO_STATUS_NON_FINITE = 13,
  SCHRO_STATUS_DEGENERATE_STATE = 14,
  SCHRO_STATUS_INVALID_GRID = 15,
  SCHRO_STATUS_INVALID_ARGUMENT = 16,
  SCHRO_STATUS_NUMERICAL = 17,
  SCHRO_STATUS_ZERO_DIAGONAL = 20,
  SCHRO_STATUS_CONVERGENCE_UNSAFE = 21,
  SCHRO_STATUS_NO_GAP = 22,
  SCHRO_STATUS_UNREACHABLE_STEADY_STATE = 23,
  SCHRO_STATUS_UNREACHABLE_EIGENVECTOR = 24,
  SCHRO_STATUS_DEGENERATE_RECOVERY = 25,
  SCHRO_STATUS_SIZE_OVERFLOW = 26,
  SCHRO_STATUS_SINGULAR = 27,
  SCHRO_STATUS_PARSE = 30,
  SCHRO_STATUS_IO = 31,
  SCHRO_STATUS_NULL_POINTER = 40,
  SCHRO_STATUS_OUT_OF_BOUNDS = 41,
  SCHRO_STATUS_PANIC = 50,
} SchroStatus;

/*
 Dense complex matrix.
 */
typedef struct SchroMatrix SchroMatrix;

/*
 Outcome of a dominant-eigenvalue estimate.
 */
typedef struct SchroPowerReport SchroPowerReport;

/*
 Outcome of a linear solve.
 */
typedef struct SchroSolveReport SchroSolveReport;

/*
 Dense complex vector.
 */
typedef struct SchroVector SchroVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, empty after a success.
 The pointer stays valid until the next call into the library.
 */
const char *schro_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *schro_version(void);

/*
 Builds a `rows` x `cols` matrix from row-major arrays; `im` may be null.

 # Safety
 `re` (and `im` when non-null) must point to `rows * cols` doubles.
 */
enum SchroStatus schro_matrix_new(size_t rows,
                                  size_t cols,
                                  const double *re,
                                  const double *im,
                                  struct SchroMatrix **out);

/*
 Reads a coordinate Matrix Market file.

 # Safety
 `path` must be a NUL-terminated string.
 */
enum SchroStatus schro_matrix_from_matrix_market(const char *path, struct SchroMatrix **out);

/*
 # Safety
 `m` must be null or a live matrix handle.
 */
size_t schro_matrix_rows(const struct SchroMatrix *m);

/*
 # Safety
 `m` must be null or a live matrix handle.
 */
size_t schro_matrix_cols(const struct SchroMatrix *m);

/*
 # Safety
 `m` must be a live matrix handle; `re` and `im` must be writable.
 */
enum SchroStatus schro_matrix_get(const struct SchroMatrix *m,
                                  size_t row,
                                  size_t col,
                                  double *re,
                                  double *im);

/*
 # Safety
 `m` must be null or a handle not yet freed.
 */
void schro_matrix_free(struct SchroMatrix *m);

/*
 Builds a vector of length `len`; `im` may be null.

 # Safety
 `re` (and `im` when non-null) must point to `len` doubles.
 */
enum SchroStatus schro_vector_new(size_t len,
                                  const double *re,
                                  const double *im,
                                  struct SchroVector **out);

/*
 # Safety
 `v` must be null or a live vector handle.
 */
size_t schro_vector_len(const struct SchroVector *v);

/*
 # Safety
 `v` must be a live vector handle; `re` and `im` must be writable.
 */
enum SchroStatus schro_vector_get(const struct SchroVector *v,
                                  size_t index,
                                  double *re,
                                  double *im);

/*
 # Safety
 `v` must be null or a handle not yet freed.
 */
void schro_vector_free(struct SchroVector *v);

/*
 Evolves dx/dt = (C − I)x to time `t` on an `n`-point grid and returns the
 unit recovered state. A non-positive `half_width` selects it from `t`.
 `success_probability` may be null.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum SchroStatus schro_propagate(const struct SchroMatrix *c,
                                 const struct SchroVector *x0,
                                 double t,
                                 size_t n,
                                 double half_width,
                                 struct SchroVector **out,
                                 double *success_probability);

/*
 Jacobi solve of A y = b with fidelity tolerance `delta`. `y0` may be null
 for a zero initial guess.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum SchroStatus schro_jacobi_solve(const struct SchroMatrix *a,
                                    const struct SchroVector *b,
                                    const struct SchroVector *y0,
                                    double delta,
                                    size_t n,
                                    struct SchroSolveReport **out);

/*
 Copies the recovered solution y into a new vector handle.

 # Safety
 `r` must be a live report; `out` must be writable.
 */
enum SchroStatus schro_solve_report_solution(const struct SchroSolveReport *r,
                                             struct SchroVector **out);

/*
 Fidelity of the solution direction against the direct solve; NaN for null.

 # Safety
 `r` must be null or a live report.
 */
double schro_solve_report_fidelity(const struct SchroSolveReport *r);

/*
 ‖A y − b‖ / ‖b‖; NaN for null.

 # Safety
 `r` must be null or a live report.
 */
double schro_solve_report_residual(const struct SchroSolveReport *r);

/*
 Evolution time used; NaN for null.

 # Safety
 `r` must be null or a live report.
 */
double schro_solve_report_time(const struct SchroSolveReport *r);

/*
 # Safety
 `r` must be null or a live report.
 */
double schro_solve_report_success_probability(const struct SchroSolveReport *r);

/*
 # Safety
 `r` must be null or a report not yet freed.
 */
void schro_solve_report_free(struct SchroSolveReport *r);

/*
 Dominant eigenvalue of C to accuracy `epsilon` from the start vector `x0`.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum SchroStatus schro_power_method(const struct SchroMatrix *c,
                                    const struct SchroVector *x0,
                                    double epsilon,
                                    size_t n,
                                    struct SchroPowerReport **out);

/*
 # Safety
 `r` must be a live report; `re` and `im` must be writable.
 */
enum SchroStatus schro_power_report_eigenvalue(const struct SchroPowerReport *r,
                                               double *re,
                                               double *im);

/*
 √Tr(C†C)·√(2 − F); NaN for null.

 # Safety
 `r` must be null or a live report.
 */
double schro_power_report_error_bound(const struct SchroPowerReport *r);

/*
 # Safety
 `r` must be null or a live report.
 */
double schro_power_report_time(const struct SchroPowerReport *r);

/*
 # Safety
 `r` must be null or a report not yet freed.
 */
void schro_power_report_free(struct SchroPowerReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHRO_H */
