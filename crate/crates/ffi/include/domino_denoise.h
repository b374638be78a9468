/* C interface to the domino-denoise library. */

#ifndef DOMINO_DENOISE_H
#define DOMINO_DENOISE_H

/* Generated by the crate build script; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Denoising mode selector for [`DdDenoiseOptions`].
typedef enum {
  // Semi-blind-spot training with domino-tiling validation.
  DD_MODE_DOMINO_DENOISE = 0,
  // Noise2Fast-style training on the domino-filled image pair.
  DD_MODE_N2F_DOMINO = 1,
} DdMode;

// Strategy used to build the two half-resolution training images.
typedef enum {
  // Minimum-cost domino tiling (the default).
  DD_PAIR_STRATEGY_DOMINO = 0,
  // Fill each gap with the mean of its 4-neighbors.
  DD_PAIR_STRATEGY_AVG_NEIGHBOR = 1,
  // Fill each gap with a uniformly chosen 4-neighbor.
  DD_PAIR_STRATEGY_RAND_NEIGHBOR = 2,
  // Fill each gap with the 4-neighbor closest in intensity.
  DD_PAIR_STRATEGY_BEST_NEIGHBOR = 3,
} DdPairStrategy;

// Result code returned by every `dd_` function.
typedef enum {
  // The call succeeded.
  DD_STATUS_OK = 0,
  // A parameter was rejected (range, shape, or enum value).
  DD_STATUS_INVALID_ARGUMENT = 1,
  // Reading or writing a file failed.
  DD_STATUS_IO = 2,
  // A file was not in a supported image or checkpoint format.
  DD_STATUS_FORMAT = 3,
  // Training produced a non-finite loss.
  DD_STATUS_NUMERIC = 4,
  // The assignment instance had no solution.
  DD_STATUS_INFEASIBLE = 5,
  // The request exceeds a built-in size limit.
  DD_STATUS_SIZE_LIMIT = 6,
  // A required pointer was null.
  DD_STATUS_NULL_POINTER = 7,
  // The library panicked; the handle states are unchanged.
  DD_STATUS_PANIC = 8,
} DdStatus;

// Opaque grayscale image handle.
typedef struct DdImage DdImage;

// Tuning knobs for [`dd_denoise`].
//
// Use [`dd_denoise_options_default`] to populate the struct, then adjust
// fields as needed. A zero value in any count field is rejected.
typedef struct {
  // Training and validation mode.
  DdMode mode;
  // Seed for every random stream in the run.
  uint64_t seed;
  // Hidden channels per network stage.
  uint32_t channels;
  // Iterations per validation epoch (domino-denoise mode).
  uint32_t epoch_len;
  // Smoothed epochs (or checks) without a new minimum before halting.
  uint32_t patience;
  // Hard cap on training iterations.
  uint64_t max_iterations;
  // Iterations between validation checks (n2f-domino mode).
  uint32_t n2f_check_interval;
  // How the training pair is constructed.
  DdPairStrategy pair_strategy;
} DdDenoiseOptions;

// Summary of a completed denoising run.
typedef struct {
  // Training iterations actually executed.
  uint64_t iterations;
  // Validation epochs (or checks) that closed.
  uint64_t epochs;
  // Epoch whose snapshot became the output.
  uint64_t best_epoch;
  // Epoch at which the run halted, or -1 if the iteration cap stopped it.
  int64_t halting_epoch;
  // Pixels never predicted and therefore copied from the input.
  uint64_t unresolved_pixels;
  // PSNR of the output against the noisy input, in dB.
  double psnr_vs_input;
} DdRunStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the most recent error message recorded on this thread, or null
// if no error has been recorded. The pointer stays valid until the next
// failing `dd_` call on the same thread.
const char *dd_last_error_message(void);

// Releases a string returned by this library. Passing null is a no-op.
//
// # Safety
// `text` must be a pointer previously returned by a `dd_` function and
// not yet freed.
void dd_string_free(char *text);

// Builds an image from row-major samples in `[0, 1]`.
//
// `bit_depth` must be 8 or 16 and controls the sample format used when
// the image is saved. On success `*out` owns the new handle.
//
// # Safety
// `data` must point to `height * width` readable doubles and `out` must
// be a valid pointer.
DdStatus dd_image_create(const double *data,
                         size_t height,
                         size_t width,
                         uint32_t bit_depth,
                         DdImage **out);

// Loads a PNG or PGM image from `path` into a new handle.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
DdStatus dd_image_load(const char *path, DdImage **out);

// Saves `image` to `path`; the format follows the file extension.
//
// # Safety
// `image` must be a live handle and `path` a NUL-terminated string.
DdStatus dd_image_save(const DdImage *image, const char *path);

// Releases an image handle. Passing null is a no-op.
//
// # Safety
// `image` must be a handle returned by this library and not yet freed.
void dd_image_free(DdImage *image);

// Writes the image height to `*out`.
//
// # Safety
// `image` must be a live handle and `out` a valid pointer.
DdStatus dd_image_height(const DdImage *image, size_t *out);

// Writes the image width to `*out`.
//
// # Safety
// `image` must be a live handle and `out` a valid pointer.
DdStatus dd_image_width(const DdImage *image, size_t *out);

// Writes the stored bit depth (8 or 16) to `*out`.
//
// # Safety
// `image` must be a live handle and `out` a valid pointer.
DdStatus dd_image_bit_depth(const DdImage *image, uint32_t *out);

// Copies the row-major samples into `buffer`, which must hold exactly
// `height * width` doubles (`buffer_len` is checked).
//
// # Safety
// `image` must be a live handle and `buffer` must point to `buffer_len`
// writable doubles.
DdStatus dd_image_data(const DdImage *image, double *buffer, size_t buffer_len);

// Fills `*out` with the default options for `mode` and `seed`.
//
// # Safety
// `out` must be a valid pointer.
DdStatus dd_denoise_options_default(DdMode mode, uint64_t seed, DdDenoiseOptions *out);

// Denoises `image` and stores a new handle in `*out`.
//
// Trains a network on the image itself according to `options`; this is
// the expensive call. When `stats` is non-null it receives a summary of
// the run.
//
// # Safety
// `image` must be a live handle, `options` and `out` valid pointers, and
// `stats` either null or a valid pointer.
DdStatus dd_denoise(const DdImage *image,
                    const DdDenoiseOptions *options,
                    DdImage **out,
                    DdRunStats *stats);

// Writes the closed-form domino tiling count of an `height x width` grid
// to `*out`. The value is exact to double precision for area up to 10^4.
//
// # Safety
// `out` must be a valid pointer.
DdStatus dd_count_tilings_formula(uint64_t height, uint64_t width, double *out);

// Computes the exact domino tiling count of an `height x width` grid and
// stores it in `*out` as a decimal string. Free the string with
// [`dd_string_free`]. Grids whose shorter side exceeds 16 are refused
// with [`DdStatus::SizeLimit`].
//
// # Safety
// `out` must be a valid pointer.
DdStatus dd_count_tilings_exact(uint64_t height, uint64_t width, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DOMINO_DENOISE_H */
