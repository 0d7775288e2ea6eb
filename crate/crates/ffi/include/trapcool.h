#ifndef TRAPCOOL_H
#define TRAPCOOL_H

/* Generated by cbindgen from trapcool-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes.
 */
typedef enum TrapcoolStatus {
  TRAPCOOL_STATUS_OK = 0,
  /**
   * Null pointer, unparsable strategy, index out of range.
   */
  TRAPCOOL_STATUS_USAGE = 1,
  /**
   * Spec invariants violated or a planner left its closed-form domain.
   */
  TRAPCOOL_STATUS_INFEASIBLE = 2,
  /**
   * The collocation solver hit its iteration cap.
   */
  TRAPCOOL_STATUS_NO_CONVERGENCE = 3,
} TrapcoolStatus;

/**
 * Opaque bang-bang plan handle.
 */
typedef struct TrapcoolPlan TrapcoolPlan;

/**
 * Opaque collocation solution handle.
 */
typedef struct TrapcoolSolution TrapcoolSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Synthesize a plan for the spec (v1, v2, gamma) with the named strategy
 * ("one", "two-intuitive", "two-optimal", "multi:N" or "best:NMAX") and
 * store a handle in `out`.
 *
 * # Safety
 * `out` must point to writable storage for one pointer; `strategy` must be a
 * valid NUL-terminated string. The handle must be released with
 * [`trapcool_plan_free`].
 */
enum TrapcoolStatus trapcool_plan_new(double v1,
                                      double v2,
                                      double gamma,
                                      const char *strategy,
                                      struct TrapcoolPlan **out);

/**
 * Total transfer time of the plan; NaN for a null handle.
 *
 * # Safety
 * `plan` must be a live handle from [`trapcool_plan_new`] or null.
 */
double trapcool_plan_total_time(const struct TrapcoolPlan *plan);

/**
 * Number of constant-control segments; 0 for a null handle.
 *
 * # Safety
 * `plan` must be a live handle or null.
 */
size_t trapcool_plan_segment_count(const struct TrapcoolPlan *plan);

/**
 * Fetch segment `index` as (duration, control value).
 *
 * # Safety
 * `plan` must be a live handle; `duration` and `u` must be writable.
 */
enum TrapcoolStatus trapcool_plan_segment(const struct TrapcoolPlan *plan,
                                          size_t index,
                                          double *duration,
                                          double *u);

/**
 * Simulate the plan and check it reaches (gamma, 0): endpoint errors are
 * written to `err_x1`/`err_x2` (either may be null). Returns `Ok` when the
 * plan verifies within `tol`.
 *
 * # Safety
 * `plan` must be a live handle; non-null out-pointers must be writable.
 */
enum TrapcoolStatus trapcool_plan_verify(const struct TrapcoolPlan *plan,
                                         double tol,
                                         double *err_x1,
                                         double *err_x2);

/**
 * JSON plan document (spec, strategy, betas, segments, total time); caller
 * frees with [`trapcool_string_free`]. Null on failure.
 *
 * # Safety
 * `plan` must be a live handle or null.
 */
char *trapcool_plan_to_json(const struct TrapcoolPlan *plan);

/**
 * Release a plan handle. Null is a no-op.
 *
 * # Safety
 * `plan` must come from [`trapcool_plan_new`] and not already be freed.
 */
void trapcool_plan_free(struct TrapcoolPlan *plan);

/**
 * Solve the order-`n` collocation problem for the spec; `m_slope <= 0` or
 * infinity disables the slope restriction. On success stores a solution
 * handle in `out`; a non-converged solve stores the handle and returns
 * `NoConvergence`.
 *
 * # Safety
 * `out` must point to writable storage for one pointer; release the handle
 * with [`trapcool_solution_free`].
 */
enum TrapcoolStatus trapcool_collocate(double v1,
                                       double v2,
                                       double gamma,
                                       size_t n,
                                       double m_slope,
                                       struct TrapcoolSolution **out);

/**
 * Solved transfer time; NaN for a null handle.
 *
 * # Safety
 * `sol` must be a live handle or null.
 */
double trapcool_solution_t_f(const struct TrapcoolSolution *sol);

/**
 * Largest remaining constraint violation; NaN for a null handle.
 *
 * # Safety
 * `sol` must be a live handle or null.
 */
double trapcool_solution_residual(const struct TrapcoolSolution *sol);

/**
 * 1 when the solve met its tolerances, 0 otherwise.
 *
 * # Safety
 * `sol` must be a live handle or null.
 */
int trapcool_solution_converged(const struct TrapcoolSolution *sol);

/**
 * Number of grid nodes (order + 1); 0 for a null handle.
 *
 * # Safety
 * `sol` must be a live handle or null.
 */
size_t trapcool_solution_node_count(const struct TrapcoolSolution *sol);

/**
 * Fetch node `index`: LGL coordinate, mapped time and nodal (x1, x2, u).
 * Null out-pointers are skipped.
 *
 * # Safety
 * `sol` must be a live handle; non-null out-pointers must be writable.
 */
enum TrapcoolStatus trapcool_solution_node(const struct TrapcoolSolution *sol,
                                           size_t index,
                                           double *node,
                                           double *t_mapped,
                                           double *x1,
                                           double *x2,
                                           double *u);

/**
 * Endpoint error of resimulating the interpolated control through the RK4
 * integrator, written to `err_x1`/`err_x2`.
 *
 * # Safety
 * `sol` must be a live handle; non-null out-pointers must be writable.
 */
enum TrapcoolStatus trapcool_solution_resimulate(const struct TrapcoolSolution *sol,
                                                 double *err_x1,
                                                 double *err_x2);

/**
 * Release a solution handle. Null is a no-op.
 *
 * # Safety
 * `sol` must come from [`trapcool_collocate`] and not already be freed.
 */
void trapcool_solution_free(struct TrapcoolSolution *sol);

/**
 * First v2 in (lo, hi) at which strategy `b` beats strategy `a` for fixed
 * v1 and gamma; written to `out`.
 *
 * # Safety
 * `a` and `b` must be valid NUL-terminated strategy names; `out` must be
 * writable.
 */
enum TrapcoolStatus trapcool_crossing_threshold(double v1,
                                                double gamma,
                                                const char *a,
                                                const char *b,
                                                double lo,
                                                double hi,
                                                double *out);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must come from a `*_to_json` call and not already be freed.
 */
void trapcool_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRAPCOOL_H */
