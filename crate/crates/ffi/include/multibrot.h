#ifndef MULTIBROT_H
#define MULTIBROT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

// Dwell value of pixels that did not escape.
#define MB_NOT_ESCAPED 0

typedef enum MbStatus {
  MB_STATUS_OK = 0,
  MB_STATUS_INVALID_ARGUMENT = 1,
  MB_STATUS_NULL_POINTER = 2,
  MB_STATUS_NON_CONVERGENCE = 3,
  MB_STATUS_INTERNAL_INCONSISTENCY = 4,
  MB_STATUS_CAP_EXCEEDED = 5,
  MB_STATUS_IO = 6,
  MB_STATUS_BUFFER_TOO_SMALL = 7,
  MB_STATUS_PANIC = 8,
} MbStatus;

typedef enum MbFixedPointClass {
  MB_FIXED_POINT_CLASS_ATTRACTOR = 0,
  MB_FIXED_POINT_CLASS_REPELLOR = 1,
  MB_FIXED_POINT_CLASS_NEUTRAL = 2,
} MbFixedPointClass;

typedef enum MbBoundaryFormat {
  MB_BOUNDARY_FORMAT_CSV = 0,
  MB_BOUNDARY_FORMAT_SVG = 1,
} MbBoundaryFormat;

typedef enum MbColormap {
  MB_COLORMAP_GRAYSCALE = 0,
  MB_COLORMAP_LOG_GRAYSCALE = 1,
} MbColormap;

typedef struct MbBoundary MbBoundary;

typedef struct MbDwellBuffer MbDwellBuffer;

typedef struct MbOrbit MbOrbit;

typedef struct MbComplex {
  double re;
  double im;
} MbComplex;

// Outcome of an orbit computation. `escaped` is false when the iteration
// budget ran out; `step` and `modulus` are then zero.
typedef struct MbOrbitOutcome {
  bool escaped;
  uint32_t step;
  double modulus;
} MbOrbitOutcome;

typedef struct MbGridSpec {
  uint32_t width;
  uint32_t height;
  struct MbComplex center;
  double scale;
  uint32_t max_iter;
} MbGridSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread, or NULL if none.
const char *mb_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *mb_version(void);

// `out = z^degree + c`.
//
// # Safety
// `out` must be valid for writes.
enum MbStatus mb_iterate_step(uint32_t degree,
                              struct MbComplex z,
                              struct MbComplex c,
                              struct MbComplex *out);

// `out = max(|c|, 2)`.
//
// # Safety
// `out` must be valid for writes.
enum MbStatus mb_default_escape_radius(uint32_t degree, struct MbComplex c, double *out);

// Writes the `degree` roots of `z^degree - z + c` into `out`.
//
// # Safety
// `out_len` must be valid for writes; `out` must hold `capacity` elements.
enum MbStatus mb_fixed_points(uint32_t degree,
                              struct MbComplex c,
                              struct MbComplex *out,
                              uintptr_t capacity,
                              uintptr_t *out_len);

// Classifies the fixed point `w` by `|f'(w)|`.
//
// # Safety
// `out_derivative_modulus` and `out_class` must be valid for writes.
enum MbStatus mb_classify_fixed_point(uint32_t degree,
                                      struct MbComplex c,
                                      struct MbComplex w,
                                      double *out_derivative_modulus,
                                      enum MbFixedPointClass *out_class);

// Computes an orbit from `z0`. `escape_radius <= 0` selects `max(|c|, 2)`.
//
// # Safety
// `out` must be valid for writes. The handle must be freed with [`mb_orbit_free`].
enum MbStatus mb_orbit_compute(uint32_t degree,
                               struct MbComplex c,
                               struct MbComplex z0,
                               uint32_t max_iter,
                               double escape_radius,
                               struct MbOrbit **out);

// Number of stored iterates, or 0 for NULL.
//
// # Safety
// `orbit` must be NULL or a live handle.
uintptr_t mb_orbit_len(const struct MbOrbit *orbit);

// Copies stored iterates into `out`.
//
// # Safety
// `orbit` must be a live handle, `out_len` valid for writes, `out` must hold `capacity` elements.
enum MbStatus mb_orbit_iterates(const struct MbOrbit *orbit,
                                struct MbComplex *out,
                                uintptr_t capacity,
                                uintptr_t *out_len);

// # Safety
// `orbit` must be a live handle and `out` valid for writes.
enum MbStatus mb_orbit_outcome(const struct MbOrbit *orbit, struct MbOrbitOutcome *out);

// Writes the orbit as `k,re,im` CSV.
//
// # Safety
// `orbit` must be a live handle and `path` a NUL-terminated string.
enum MbStatus mb_orbit_write_csv(const struct MbOrbit *orbit, const char *path);

// # Safety
// `orbit` must be NULL or a handle not yet freed.
void mb_orbit_free(struct MbOrbit *orbit);

// Main-lobe boundary point at curve parameter `phi`.
//
// # Safety
// `out` must be valid for writes.
enum MbStatus mb_boundary_point(uint32_t degree, double phi, struct MbComplex *out);

// Squared modulus of the boundary point at `phi`, in closed form.
//
// # Safety
// `out` must be valid for writes.
enum MbStatus mb_radius_squared(uint32_t degree, double phi, double *out);

// Smallest and largest boundary modulus.
//
// # Safety
// `out_min` and `out_max` must be valid for writes.
enum MbStatus mb_c_extrema(uint32_t degree, double *out_min, double *out_max);

// Writes the `degree - 1` indent points into `out`.
//
// # Safety
// `out_len` must be valid for writes; `out` must hold `capacity` elements.
enum MbStatus mb_indent_points(uint32_t degree,
                               struct MbComplex *out,
                               uintptr_t capacity,
                               uintptr_t *out_len);

// Samples the boundary over its full period.
//
// # Safety
// `out` must be valid for writes. Free the handle with [`mb_boundary_free`].
enum MbStatus mb_boundary_sample(uint32_t degree,
                                 uintptr_t samples_per_lobe,
                                 struct MbBoundary **out);

// Number of samples, or 0 for NULL.
//
// # Safety
// `boundary` must be NULL or a live handle.
uintptr_t mb_boundary_len(const struct MbBoundary *boundary);

// # Safety
// `boundary` must be a live handle; `out_phi` and `out_point` valid for writes.
enum MbStatus mb_boundary_get(const struct MbBoundary *boundary,
                              uintptr_t index,
                              double *out_phi,
                              struct MbComplex *out_point);

// # Safety
// `boundary` must be a live handle and `path` a NUL-terminated string.
enum MbStatus mb_boundary_write(const struct MbBoundary *boundary,
                                enum MbBoundaryFormat format,
                                const char *path);

// # Safety
// `boundary` must be NULL or a handle not yet freed.
void mb_boundary_free(struct MbBoundary *boundary);

// Escape step of the critical orbit, or [`MB_NOT_ESCAPED`] for members.
//
// # Safety
// `out_dwell` must be valid for writes.
enum MbStatus mb_membership(uint32_t degree,
                            struct MbComplex c,
                            uint32_t max_iter,
                            uint32_t *out_dwell);

// Renders a dwell grid with `workers` threads. Output is identical for any worker count.
//
// # Safety
// `out` must be valid for writes. Free the handle with [`mb_dwell_free`].
enum MbStatus mb_render(uint32_t degree,
                        struct MbGridSpec spec,
                        uint32_t workers,
                        struct MbDwellBuffer **out);

// # Safety
// `buffer` must be NULL or a live handle.
uint32_t mb_dwell_width(const struct MbDwellBuffer *buffer);

// # Safety
// `buffer` must be NULL or a live handle.
uint32_t mb_dwell_height(const struct MbDwellBuffer *buffer);

// Row-major dwell values, `width * height` of them, top row first. The
// pointer is valid until the handle is freed; NULL for a NULL handle.
//
// # Safety
// `buffer` must be NULL or a live handle.
const uint32_t *mb_dwell_data(const struct MbDwellBuffer *buffer);

// # Safety
// `buffer` must be a live handle and `path` a NUL-terminated string.
enum MbStatus mb_dwell_write_ppm(const struct MbDwellBuffer *buffer,
                                 enum MbColormap colormap,
                                 const char *path);

// # Safety
// `buffer` must be NULL or a handle not yet freed.
void mb_dwell_free(struct MbDwellBuffer *buffer);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTIBROT_H */
