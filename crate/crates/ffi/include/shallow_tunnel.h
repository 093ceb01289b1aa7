#ifndef SHALLOW_TUNNEL_H
#define SHALLOW_TUNNEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum StStatus {
  ST_STATUS_OK = 0,
  ST_STATUS_NULL_POINTER = 1,
  ST_STATUS_INVALID_UTF8 = 2,
  ST_STATUS_PARSE = 3,
  ST_STATUS_CONFIG = 4,
  ST_STATUS_GEOMETRY = 5,
  ST_STATUS_DOMAIN = 6,
  ST_STATUS_SINGULAR = 7,
  ST_STATUS_DIVERGENCE = 8,
  ST_STATUS_NON_CONVERGENCE = 9,
  ST_STATUS_IO = 10,
  ST_STATUS_PANIC = 11,
} StStatus;

/**
 * Opaque solved model.
 */
typedef struct StModel StModel;

/**
 * Cartesian fields at one point and time. Stresses in kPa, displacements in m.
 */
typedef struct StFieldSample {
  double sigma_x;
  double sigma_y;
  double tau_xy;
  double sigma_x_total;
  double sigma_y_total;
  double tau_xy_total;
  double u;
  double v;
} StFieldSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds and solves a model from a NUL-terminated TOML document.
 *
 * # Safety
 * `toml` must point to a NUL-terminated string and `out` to writable storage
 * for one pointer. On success `*out` owns a model to be released with
 * [`st_model_free`]; on failure `*out` is set to null.
 */
enum StStatus st_model_new_from_toml(const char *toml, struct StModel **out);

/**
 * Builds and solves the built-in reference case.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum StStatus st_model_new_reference(struct StModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must be null or a pointer obtained from a constructor in this
 * library that has not been freed yet.
 */
void st_model_free(struct StModel *model);

/**
 * Number of correction passes the solver needed.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum StStatus st_model_iterations(const struct StModel *model, uintptr_t *out);

/**
 * Series truncation order `N`; coefficient arrays have `2N + 1` entries.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum StStatus st_model_order(const struct StModel *model, uintptr_t *out);

/**
 * Copies the real coefficients `f_{-N}..f_N` into `buf`.
 *
 * # Safety
 * `buf` must have room for `len` doubles; `len` must be at least `2N + 1`.
 */
enum StStatus st_model_coefficients(const struct StModel *model, double *buf, uintptr_t len);

/**
 * Fields at physical point `(x, y)` and grid time `t` (days).
 * Points with `y = 0` are treated as ground-surface points.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum StStatus st_model_eval(const struct StModel *model,
                            double x,
                            double y,
                            double t,
                            struct StFieldSample *out);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *st_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *st_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHALLOW_TUNNEL_H */
