#ifndef QUASICIRCLE_H
#define QUASICIRCLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  /**
   * Bad grid, coefficient, parameter or buffer size.
   */
  QC_STATUS_INVALID_ARGUMENT = 2,
  /**
   * An iteration hit its limit; any estimate written is the last iterate.
   */
  QC_STATUS_NOT_CONVERGED = 3,
  /**
   * Degenerate curve, non-monotone boundary map or non-finite evaluation.
   */
  QC_STATUS_DEGENERATE = 4,
  QC_STATUS_IO = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  QC_STATUS_PANIC = 6,
} QcStatus;

/**
 * Beltrami coefficient on a grid.
 */
typedef struct QcBeltrami QcBeltrami;

/**
 * Staggered square grid.
 */
typedef struct QcGrid QcGrid;

/**
 * A map of the plane that can be evaluated pointwise.
 */
typedef struct QcMap QcMap;

/**
 * Samples of the image of a real interval under a map.
 */
typedef struct QcTrace QcTrace;

typedef struct QcComplex {
  double re;
  double im;
} QcComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *qc_last_error(void);

const char *qc_version(void);

/**
 * Grid on `[-half_width, half_width]^2` with `n` cells per side.
 *
 * # Safety
 * `out` must be null or point to writable storage for a handle.
 */
enum QcStatus qc_grid_new(double half_width, size_t n, struct QcGrid **out);

/**
 * # Safety
 * `grid` must be null or a live grid handle.
 */
size_t qc_grid_n(const struct QcGrid *grid);

/**
 * # Safety
 * `grid` must be null or a live grid handle.
 */
double qc_grid_half_width(const struct QcGrid *grid);

/**
 * # Safety
 * `grid` must be null or a handle from `qc_grid_new` not yet freed.
 */
void qc_grid_free(struct QcGrid *grid);

/**
 * `c` times a mollified indicator of the ball `|z - center| < radius`.
 *
 * # Safety
 * `grid` must be a live grid handle; `out` must point to handle storage.
 */
enum QcStatus qc_beltrami_ball(const struct QcGrid *grid,
                               struct QcComplex c,
                               struct QcComplex center,
                               double radius,
                               double mollify_width,
                               struct QcBeltrami **out);

/**
 * Coefficient from `n * n` samples in row-major order (index `k * n + j`,
 * `k` counting rows from the bottom).
 *
 * # Safety
 * `values` must point to `len` readable elements.
 */
enum QcStatus qc_beltrami_from_values(const struct QcGrid *grid,
                                      const struct QcComplex *values,
                                      size_t len,
                                      struct QcBeltrami **out);

/**
 * # Safety
 * `mu` must be a live coefficient handle; `out` must be writable.
 */
enum QcStatus qc_beltrami_sup(const struct QcBeltrami *mu, double *out);

/**
 * # Safety
 * `mu` must be null or a coefficient handle not yet freed.
 */
void qc_beltrami_free(struct QcBeltrami *mu);

/**
 * Carleson norm of `|mu|^2 / |y| dA` over balls centred on the real axis.
 *
 * # Safety
 * `mu` must be a live coefficient handle; `out` must be writable.
 */
enum QcStatus qc_carleson_norm(const struct QcBeltrami *mu, double *out);

/**
 * Power-iteration estimate of `||mu S||` on `L^2(dA / |y|)`.
 *
 * # Safety
 * `mu` must be a live coefficient handle; `out` must be writable.
 */
enum QcStatus qc_weighted_operator_norm(const struct QcBeltrami *mu,
                                        size_t padding_factor,
                                        double tol,
                                        size_t max_iter,
                                        double *out);

/**
 * Normalized solution `z + O(1/z)` of the Beltrami equation.
 *
 * # Safety
 * `mu` must be a live coefficient handle; `out` must point to handle storage.
 */
enum QcStatus qc_solve_beltrami(const struct QcBeltrami *mu,
                                size_t padding_factor,
                                double tol,
                                size_t max_iter,
                                struct QcMap **out);

/**
 * # Safety
 * `out` must point to handle storage.
 */
enum QcStatus qc_map_identity(struct QcMap **out);

/**
 * Piecewise power map with `|f(z)| = |z|^(1/K)`, `1 < K < 2`.
 *
 * # Safety
 * `out` must point to handle storage.
 */
enum QcStatus qc_map_sector(double k, struct QcMap **out);

/**
 * # Safety
 * `map` must be a live map handle; `out` must be writable.
 */
enum QcStatus qc_map_eval(const struct QcMap *map, struct QcComplex z, struct QcComplex *out);

/**
 * # Safety
 * `map` must be null or a map handle not yet freed.
 */
void qc_map_free(struct QcMap *map);

/**
 * Image of `samples` equispaced points of `[-half_window, half_window]`.
 *
 * # Safety
 * `map` must be a live map handle; `out` must point to handle storage.
 */
enum QcStatus qc_trace_new(const struct QcMap *map,
                           double half_window,
                           size_t samples,
                           struct QcTrace **out);

/**
 * # Safety
 * `trace` must be null or a live trace handle.
 */
size_t qc_trace_len(const struct QcTrace *trace);

/**
 * Copies the trace points into `buf`, which must hold `qc_trace_len` entries.
 *
 * # Safety
 * `buf` must point to `cap` writable elements.
 */
enum QcStatus qc_trace_points(const struct QcTrace *trace, struct QcComplex *buf, size_t cap);

/**
 * # Safety
 * `trace` must be a live trace handle; `out` must be writable.
 */
enum QcStatus qc_trace_chord_arc(const struct QcTrace *trace, double *out);

/**
 * Norm of the discretized Cauchy integral on the trace.
 *
 * # Safety
 * `trace` must be a live trace handle; `out` must be writable.
 */
enum QcStatus qc_trace_cauchy_norm(const struct QcTrace *trace,
                                   double tol,
                                   size_t max_iter,
                                   double *out);

/**
 * # Safety
 * `trace` must be null or a trace handle not yet freed.
 */
void qc_trace_free(struct QcTrace *trace);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QUASICIRCLE_H */
