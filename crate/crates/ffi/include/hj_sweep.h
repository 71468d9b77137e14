#ifndef HJ_SWEEP_H
#define HJ_SWEEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes returned by every fallible entry point.
typedef enum HjStatus {
  HJ_STATUS_OK = 0,
  HJ_STATUS_NULL_POINTER = 1,
  HJ_STATUS_INVALID_ARGUMENT = 2,
  HJ_STATUS_UNKNOWN_PROBLEM = 3,
  HJ_STATUS_DIVERGED = 4,
  HJ_STATUS_SOLVER_ERROR = 5,
  HJ_STATUS_BUFFER_TOO_SMALL = 6,
  HJ_STATUS_PANIC = 7,
} HjStatus;

// Which nodal array to copy out of a solution.
typedef enum HjField {
  HJ_FIELD_PHI = 0,
  HJ_FIELD_U = 1,
  HJ_FIELD_V = 2,
} HjField;

// Opaque result of [`hj_solve`].
typedef struct HjSolution HjSolution;

// Solver settings. Fill with [`hj_options_default`] and override fields;
// `NAN` (or `0` for `max_iterations`) keeps the catalogued value for the
// problem and mesh.
typedef struct HjOptions {
  // 1 or 2.
  uint32_t approach;
  bool hybrid;
  double omega;
  double epsilon;
  double delta_tol;
  uint32_t max_iterations;
  // Weight freezing threshold; `NAN` disables freezing.
  double freeze_tol;
} HjOptions;

// Scalar summary of a solve. Error norms are `NAN` for problems without a
// closed form.
typedef struct HjSolveInfo {
  // Domain nodes per axis.
  size_t n;
  double h;
  double xmin;
  double ymin;
  size_t iterations;
  bool converged;
  double l1_error;
  double linf_error;
  double wall_time;
  double epsilon;
} HjSolveInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Writes the catalogue-default options into `out`.
//
// # Safety
// `out` must be null or point to writable memory for one `HjOptions`.
enum HjStatus hj_options_default(struct HjOptions *out);

// Solves benchmark `problem` (`"ex1"` .. `"ex7sv"`) on an `n x n` mesh.
// On success `*out` owns a new solution; on failure it is set to null.
//
// # Safety
// `problem` must be a NUL-terminated string, `options` null (catalogue
// defaults) or valid, and `out` writable.
enum HjStatus hj_solve(const char *problem,
                       size_t n,
                       const struct HjOptions *options,
                       struct HjSolution **out);

// Releases a solution. Null is ignored.
//
// # Safety
// `solution` must be null or a pointer from [`hj_solve`] not yet freed.
void hj_solution_free(struct HjSolution *solution);

// Fills `out` with the scalar summary of `solution`.
//
// # Safety
// `solution` must come from [`hj_solve`]; `out` must be writable.
enum HjStatus hj_solution_info(const struct HjSolution *solution, struct HjSolveInfo *out);

// Copies one nodal array (`n * n` values, `y` outer, `x` inner) into `buf`.
//
// # Safety
// `solution` must come from [`hj_solve`]; `buf` must hold `len` doubles.
enum HjStatus hj_solution_copy_field(const struct HjSolution *solution,
                                     enum HjField which,
                                     double *buf,
                                     size_t len);

// Copies the per-iteration mean `|Δφ|` history. `*written` receives the
// full history length even when `buf` is too small.
//
// # Safety
// `solution` must come from [`hj_solve`]; `buf` must hold `len` doubles
// (it may be null when `len` is 0); `written` must be writable.
enum HjStatus hj_solution_delta_history(const struct HjSolution *solution,
                                        double *buf,
                                        size_t len,
                                        size_t *written);

// Static description of a status code.
const char *hj_status_message(enum HjStatus status);

// Copies the calling thread's last error message into `buf` (truncated,
// always NUL-terminated) and returns its full length in bytes.
//
// # Safety
// `buf` must be null or hold `len` bytes.
size_t hj_last_error(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HJ_SWEEP_H */
