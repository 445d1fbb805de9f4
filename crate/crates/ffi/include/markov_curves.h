#ifndef MARKOV_CURVES_H
#define MARKOV_CURVES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum McStatus {
  MC_STATUS_OK = 0,
  MC_STATUS_NULL_POINTER = 1,
  MC_STATUS_INVALID_ARGUMENT = 2,
  MC_STATUS_UNKNOWN_GERM = 3,
  MC_STATUS_IO = 4,
  MC_STATUS_PARSE = 5,
  MC_STATUS_NUMERIC = 6,
  MC_STATUS_BUFFER_TOO_SMALL = 7,
  MC_STATUS_PANIC = 8,
} McStatus;

/**
 * Opaque curve germ.
 */
typedef struct McGerm McGerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static nul-terminated string.
 */
const char *mc_version(void);

/**
 * Message of the last failure on this thread, empty after a success. Valid
 * until the next call into the library from this thread.
 */
const char *mc_last_error_message(void);

/**
 * # Safety
 * `id` must be a nul-terminated string and `out` a writable pointer.
 */
enum McStatus mc_germ_builtin(const char *id, struct McGerm **out);

/**
 * # Safety
 * `path` must be a nul-terminated string and `out` a writable pointer.
 */
enum McStatus mc_germ_from_file(const char *path, struct McGerm **out);

/**
 * Parses germ file text; `name` may be null.
 *
 * # Safety
 * `text` and a non-null `name` must be nul-terminated strings; `out` writable.
 */
enum McStatus mc_germ_from_text(const char *text, const char *name, struct McGerm **out);

/**
 * Releases a germ; null is ignored.
 *
 * # Safety
 * `germ` must come from a constructor of this library and not be used again.
 */
void mc_germ_free(struct McGerm *germ);

/**
 * # Safety
 * `germ` must be a live handle and `out` writable.
 */
enum McStatus mc_germ_multiplicity(const struct McGerm *germ, uint32_t *out);

/**
 * # Safety
 * `germ` must be a live handle and `out` writable.
 */
enum McStatus mc_germ_ambient_dim(const struct McGerm *germ, size_t *out);

/**
 * Writes `x₀ + φ(z)` as `dim` real and `dim` imaginary parts; `len` is the
 * capacity of each buffer.
 *
 * # Safety
 * `germ` must be a live handle; `out_re` and `out_im` must hold `len` doubles.
 */
enum McStatus mc_germ_eval(const struct McGerm *germ,
                           double z_re,
                           double z_im,
                           double *out_re,
                           double *out_im,
                           size_t len);

/**
 * Unit tangent vector at the basepoint.
 *
 * # Safety
 * `germ` must be a live handle; `out` must hold `len` doubles.
 */
enum McStatus mc_germ_tangent(const struct McGerm *germ, double *out, size_t len);

/**
 * Straight-path geodesic distance between `φ(z₁)` and `φ(z₂)`.
 *
 * # Safety
 * `germ` must be a live handle and `out` writable.
 */
enum McStatus mc_geodesic_distance(const struct McGerm *germ,
                                   double z1_re,
                                   double z1_im,
                                   double z2_re,
                                   double z2_im,
                                   double *out);

/**
 * Markov factor on the real trace of `germ` at scale `eps`, along its tangent.
 *
 * # Safety
 * `germ` must be a live handle and `out` writable.
 */
enum McStatus mc_markov_factor_germ(const struct McGerm *germ,
                                    double eps,
                                    size_t density,
                                    uint32_t degree,
                                    double *out);

/**
 * Markov factor at `x0` of the one-dimensional sample set `samples`.
 *
 * # Safety
 * `samples` must hold `count` doubles and `out` be writable.
 */
enum McStatus mc_markov_factor_samples(const double *samples,
                                       size_t count,
                                       double x0,
                                       uint32_t degree,
                                       double *out);

/**
 * Fitted degree and radius exponents of a scaling study.
 *
 * # Safety
 * `germ` must be a live handle; `degrees` and `epsilons` must hold the given
 * counts; the outputs must be writable.
 */
enum McStatus mc_scaling_fit(const struct McGerm *germ,
                             const uint32_t *degrees,
                             size_t degree_count,
                             const double *epsilons,
                             size_t epsilon_count,
                             size_t density,
                             double *alpha_deg,
                             double *alpha_eps);

/**
 * Green function of `[−1, 1]` with pole at infinity; NaN for non-finite input.
 */
double mc_green_interval(double z_re, double z_im);

/**
 * Green function of the real segment `[a, b]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum McStatus mc_green_segment(double z_re, double z_im, double a, double b, double *out);

/**
 * Siciak LP value at `z` for `count` Chebyshev samples of `[a, b]`, with
 * the relaxation slack bounding its error from the polygon relaxation.
 *
 * # Safety
 * `value` and `slack` must be writable.
 */
enum McStatus mc_siciak_interval(double a,
                                 double b,
                                 size_t count,
                                 uint32_t degree,
                                 size_t facets,
                                 double z_re,
                                 double z_im,
                                 double *value,
                                 double *slack);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MARKOV_CURVES_H */
