//! C ABI wrapper around the domino-denoise library.
//!
//! Every function is `extern "C"`, returns a [`DdStatus`], and writes its
//! result through an out-pointer. Images cross the boundary as opaque
//! [`DdImage`] handles owned by this library; callers release them with
//! [`dd_image_free`]. Strings returned by the library are released with
//! [`dd_string_free`]. On failure a thread-local message is kept and can
//! be read with [`dd_last_error_message`] until the next call on the same
//! thread that records an error.
//!
//! The committed header `include/domino_denoise.h` is generated from this
//! file by the build script; regenerate it by rebuilding the crate.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use domino_denoise::imaging::{self, BitDepth};
use domino_denoise::tiling;
use domino_denoise::trainer::{self, DenoiseConfig, Mode, PairStrategy};
use domino_denoise::{DenoiseError, Image};

/// Result code returned by every `dd_` function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdStatus {
    /// The call succeeded.
    Ok = 0,
    /// A parameter was rejected (range, shape, or enum value).
    InvalidArgument = 1,
    /// Reading or writing a file failed.
    Io = 2,
    /// A file was not in a supported image or checkpoint format.
    Format = 3,
    /// Training produced a non-finite loss.
    Numeric = 4,
    /// The assignment instance had no solution.
    Infeasible = 5,
    /// The request exceeds a built-in size limit.
    SizeLimit = 6,
    /// A required pointer was null.
    NullPointer = 7,
    /// The library panicked; the handle states are unchanged.
    Panic = 8,
}

/// Denoising mode selector for [`DdDenoiseOptions`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdMode {
    /// Semi-blind-spot training with domino-tiling validation.
    DominoDenoise = 0,
    /// Noise2Fast-style training on the domino-filled image pair.
    N2fDomino = 1,
}

/// Strategy used to build the two half-resolution training images.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdPairStrategy {
    /// Minimum-cost domino tiling (the default).
    Domino = 0,
    /// Fill each gap with the mean of its 4-neighbors.
    AvgNeighbor = 1,
    /// Fill each gap with a uniformly chosen 4-neighbor.
    RandNeighbor = 2,
    /// Fill each gap with the 4-neighbor closest in intensity.
    BestNeighbor = 3,
}

/// Tuning knobs for [`dd_denoise`].
///
/// Use [`dd_denoise_options_default`] to populate the struct, then adjust
/// fields as needed. A zero value in any count field is rejected.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DdDenoiseOptions {
    /// Training and validation mode.
    pub mode: DdMode,
    /// Seed for every random stream in the run.
    pub seed: u64,
    /// Hidden channels per network stage.
    pub channels: u32,
    /// Iterations per validation epoch (domino-denoise mode).
    pub epoch_len: u32,
    /// Smoothed epochs (or checks) without a new minimum before halting.
    pub patience: u32,
    /// Hard cap on training iterations.
    pub max_iterations: u64,
    /// Iterations between validation checks (n2f-domino mode).
    pub n2f_check_interval: u32,
    /// How the training pair is constructed.
    pub pair_strategy: DdPairStrategy,
}

/// Summary of a completed denoising run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DdRunStats {
    /// Training iterations actually executed.
    pub iterations: u64,
    /// Validation epochs (or checks) that closed.
    pub epochs: u64,
    /// Epoch whose snapshot became the output.
    pub best_epoch: u64,
    /// Epoch at which the run halted, or -1 if the iteration cap stopped it.
    pub halting_epoch: i64,
    /// Pixels never predicted and therefore copied from the input.
    pub unresolved_pixels: u64,
    /// PSNR of the output against the noisy input, in dB.
    pub psnr_vs_input: f64,
}

/// Opaque grayscale image handle.
pub struct DdImage {
    inner: Image,
}

thread_local! {
    static LAST_ERROR: std::cell::RefCell<Option<CString>> =
        const { std::cell::RefCell::new(None) };
}

fn record_error(message: String) {
    let stored = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn status_of(err: &DenoiseError) -> DdStatus {
    match err {
        DenoiseError::Io { .. } => DdStatus::Io,
        DenoiseError::Format(_) | DenoiseError::Checkpoint(_) => DdStatus::Format,
        DenoiseError::NonFiniteLoss(_) => DdStatus::Numeric,
        DenoiseError::Infeasible => DdStatus::Infeasible,
        DenoiseError::SizeLimit(_) => DdStatus::SizeLimit,
        _ => DdStatus::InvalidArgument,
    }
}

fn fail(err: DenoiseError) -> DdStatus {
    let status = status_of(&err);
    record_error(err.to_string());
    status
}

fn fail_null(name: &str) -> DdStatus {
    record_error(format!("{name} must not be null"));
    DdStatus::NullPointer
}

fn guarded(body: impl FnOnce() -> DdStatus) -> DdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            record_error("panic across the C boundary".to_string());
            DdStatus::Panic
        }
    }
}

unsafe fn path_from_c(raw: *const c_char) -> Result<&'static Path, DdStatus> {
    if raw.is_null() {
        return Err(fail_null("path"));
    }
    match CStr::from_ptr(raw).to_str() {
        Ok(text) => Ok(Path::new(text)),
        Err(_) => {
            record_error("path is not valid UTF-8".to_string());
            Err(DdStatus::InvalidArgument)
        }
    }
}

/// Returns the most recent error message recorded on this thread, or null
/// if no error has been recorded. The pointer stays valid until the next
/// failing `dd_` call on the same thread.
#[no_mangle]
pub extern "C" fn dd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |message| message.as_ptr())
    })
}

/// Releases a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `text` must be a pointer previously returned by a `dd_` function and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dd_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Builds an image from row-major samples in `[0, 1]`.
///
/// `bit_depth` must be 8 or 16 and controls the sample format used when
/// the image is saved. On success `*out` owns the new handle.
///
/// # Safety
/// `data` must point to `height * width` readable doubles and `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_image_create(
    data: *const f64,
    height: usize,
    width: usize,
    bit_depth: u32,
    out: *mut *mut DdImage,
) -> DdStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        if data.is_null() {
            return fail_null("data");
        }
        let depth = match bit_depth {
            8 => BitDepth::Eight,
            16 => BitDepth::Sixteen,
            other => {
                return fail(DenoiseError::InvalidArgument(format!(
                    "bit depth must be 8 or 16, got {other}"
                )))
            }
        };
        let count = match height.checked_mul(width) {
            Some(count) => count,
            None => {
                return fail(DenoiseError::InvalidArgument(format!(
                    "image dimensions {height}x{width} overflow"
                )))
            }
        };
        let samples = std::slice::from_raw_parts(data, count).to_vec();
        match Image::from_data(height, width, samples, depth) {
            Ok(image) => {
                *out = Box::into_raw(Box::new(DdImage { inner: image }));
                DdStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Loads a PNG or PGM image from `path` into a new handle.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_image_load(path: *const c_char, out: *mut *mut DdImage) -> DdStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let path = match path_from_c(path) {
            Ok(path) => path,
            Err(status) => return status,
        };
        match imaging::load_image(path) {
            Ok(image) => {
                *out = Box::into_raw(Box::new(DdImage { inner: image }));
                DdStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Saves `image` to `path`; the format follows the file extension.
///
/// # Safety
/// `image` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dd_image_save(image: *const DdImage, path: *const c_char) -> DdStatus {
    guarded(|| {
        let Some(handle) = image.as_ref() else {
            return fail_null("image");
        };
        let path = match path_from_c(path) {
            Ok(path) => path,
            Err(status) => return status,
        };
        match imaging::save_image(&handle.inner, path) {
            Ok(()) => DdStatus::Ok,
            Err(err) => fail(err),
        }
    })
}

/// Releases an image handle. Passing null is a no-op.
///
/// # Safety
/// `image` must be a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dd_image_free(image: *mut DdImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Writes the image height to `*out`.
///
/// # Safety
/// `image` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_image_height(image: *const DdImage, out: *mut usize) -> DdStatus {
    guarded(|| {
        let Some(handle) = image.as_ref() else {
            return fail_null("image");
        };
        if out.is_null() {
            return fail_null("out");
        }
        *out = handle.inner.height();
        DdStatus::Ok
    })
}

/// Writes the image width to `*out`.
///
/// # Safety
/// `image` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_image_width(image: *const DdImage, out: *mut usize) -> DdStatus {
    guarded(|| {
        let Some(handle) = image.as_ref() else {
            return fail_null("image");
        };
        if out.is_null() {
            return fail_null("out");
        }
        *out = handle.inner.width();
        DdStatus::Ok
    })
}

/// Writes the stored bit depth (8 or 16) to `*out`.
///
/// # Safety
/// `image` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_image_bit_depth(image: *const DdImage, out: *mut u32) -> DdStatus {
    guarded(|| {
        let Some(handle) = image.as_ref() else {
            return fail_null("image");
        };
        if out.is_null() {
            return fail_null("out");
        }
        *out = match handle.inner.bit_depth() {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        };
        DdStatus::Ok
    })
}

/// Copies the row-major samples into `buffer`, which must hold exactly
/// `height * width` doubles (`buffer_len` is checked).
///
/// # Safety
/// `image` must be a live handle and `buffer` must point to `buffer_len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dd_image_data(
    image: *const DdImage,
    buffer: *mut f64,
    buffer_len: usize,
) -> DdStatus {
    guarded(|| {
        let Some(handle) = image.as_ref() else {
            return fail_null("image");
        };
        if buffer.is_null() {
            return fail_null("buffer");
        }
        let data = handle.inner.data();
        if buffer_len != data.len() {
            return fail(DenoiseError::InvalidArgument(format!(
                "buffer holds {buffer_len} samples, image has {}",
                data.len()
            )));
        }
        std::slice::from_raw_parts_mut(buffer, buffer_len).copy_from_slice(data);
        DdStatus::Ok
    })
}

/// Fills `*out` with the default options for `mode` and `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_denoise_options_default(
    mode: DdMode,
    seed: u64,
    out: *mut DdDenoiseOptions,
) -> DdStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let defaults = DenoiseConfig::new(Mode::DominoDenoise, seed);
        *out = DdDenoiseOptions {
            mode,
            seed,
            channels: defaults.channels as u32,
            epoch_len: defaults.epoch_len as u32,
            patience: defaults.patience as u32,
            max_iterations: defaults.max_iterations,
            n2f_check_interval: defaults.n2f_check_interval as u32,
            pair_strategy: DdPairStrategy::Domino,
        };
        DdStatus::Ok
    })
}

fn config_from(options: &DdDenoiseOptions) -> DenoiseConfig {
    let mode = match options.mode {
        DdMode::DominoDenoise => Mode::DominoDenoise,
        DdMode::N2fDomino => Mode::N2fDomino,
    };
    let mut config = DenoiseConfig::new(mode, options.seed);
    config.channels = options.channels as usize;
    config.epoch_len = options.epoch_len as usize;
    config.patience = options.patience as usize;
    config.max_iterations = options.max_iterations;
    config.n2f_check_interval = options.n2f_check_interval as usize;
    config.pair_strategy = match options.pair_strategy {
        DdPairStrategy::Domino => PairStrategy::Domino,
        DdPairStrategy::AvgNeighbor => PairStrategy::AvgNeighbor,
        DdPairStrategy::RandNeighbor => PairStrategy::RandNeighbor,
        DdPairStrategy::BestNeighbor => PairStrategy::BestNeighbor,
    };
    config
}

/// Denoises `image` and stores a new handle in `*out`.
///
/// Trains a network on the image itself according to `options`; this is
/// the expensive call. When `stats` is non-null it receives a summary of
/// the run.
///
/// # Safety
/// `image` must be a live handle, `options` and `out` valid pointers, and
/// `stats` either null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_denoise(
    image: *const DdImage,
    options: *const DdDenoiseOptions,
    out: *mut *mut DdImage,
    stats: *mut DdRunStats,
) -> DdStatus {
    guarded(|| {
        let Some(handle) = image.as_ref() else {
            return fail_null("image");
        };
        let Some(options) = options.as_ref() else {
            return fail_null("options");
        };
        if out.is_null() {
            return fail_null("out");
        }
        let config = config_from(options);
        match trainer::run(&handle.inner, &config) {
            Ok((denoised, report)) => {
                if !stats.is_null() {
                    *stats = DdRunStats {
                        iterations: report.iterations,
                        epochs: report.epochs as u64,
                        best_epoch: report.best_epoch as u64,
                        halting_epoch: report
                            .halting_epoch
                            .map_or(-1, |epoch| epoch as i64),
                        unresolved_pixels: report.unresolved_pixels,
                        psnr_vs_input: report.psnr_vs_input,
                    };
                }
                *out = Box::into_raw(Box::new(DdImage { inner: denoised }));
                DdStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Writes the closed-form domino tiling count of an `height x width` grid
/// to `*out`. The value is exact to double precision for area up to 10^4.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_count_tilings_formula(
    height: u64,
    width: u64,
    out: *mut f64,
) -> DdStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let (m, n) = match (usize::try_from(height), usize::try_from(width)) {
            (Ok(m), Ok(n)) => (m, n),
            _ => {
                return fail(DenoiseError::InvalidArgument(format!(
                    "grid {height}x{width} does not fit in usize"
                )))
            }
        };
        if m == 0 || n == 0 {
            return fail(DenoiseError::InvalidArgument(
                "grid dimensions must be positive".to_string(),
            ));
        }
        if m.saturating_mul(n) > 10_000 {
            return fail(DenoiseError::SizeLimit(format!(
                "grid area {} exceeds 10000",
                m * n
            )));
        }
        *out = tiling::count_tilings_formula(m, n);
        DdStatus::Ok
    })
}

/// Computes the exact domino tiling count of an `height x width` grid and
/// stores it in `*out` as a decimal string. Free the string with
/// [`dd_string_free`]. Grids whose shorter side exceeds 16 are refused
/// with [`DdStatus::SizeLimit`].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dd_count_tilings_exact(
    height: u64,
    width: u64,
    out: *mut *mut c_char,
) -> DdStatus {
    guarded(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let (m, n) = match (usize::try_from(height), usize::try_from(width)) {
            (Ok(m), Ok(n)) => (m, n),
            _ => {
                return fail(DenoiseError::InvalidArgument(format!(
                    "grid {height}x{width} does not fit in usize"
                )))
            }
        };
        match tiling::count_tilings_exact(m, n) {
            Ok(count) => {
                let text = CString::new(count.to_string())
                    .expect("a decimal string never contains NUL");
                *out = text.into_raw();
                DdStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn make_image(height: usize, width: usize, fill: f64) -> *mut DdImage {
        let data = vec![fill; height * width];
        let mut handle: *mut DdImage = ptr::null_mut();
        let status =
            unsafe { dd_image_create(data.as_ptr(), height, width, 8, &mut handle) };
        assert_eq!(status, DdStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    #[test]
    fn image_round_trip_preserves_samples_and_shape() {
        let data: Vec<f64> = (0..120).map(|k| k as f64 / 119.0).collect();
        let mut handle: *mut DdImage = ptr::null_mut();
        let status = unsafe { dd_image_create(data.as_ptr(), 10, 12, 16, &mut handle) };
        assert_eq!(status, DdStatus::Ok);

        let (mut height, mut width, mut depth) = (0usize, 0usize, 0u32);
        unsafe {
            assert_eq!(dd_image_height(handle, &mut height), DdStatus::Ok);
            assert_eq!(dd_image_width(handle, &mut width), DdStatus::Ok);
            assert_eq!(dd_image_bit_depth(handle, &mut depth), DdStatus::Ok);
        }
        assert_eq!((height, width, depth), (10, 12, 16));

        let mut copied = vec![0.0; 120];
        let status = unsafe { dd_image_data(handle, copied.as_mut_ptr(), copied.len()) };
        assert_eq!(status, DdStatus::Ok);
        assert_eq!(copied, data);

        unsafe { dd_image_free(handle) };
    }

    #[test]
    fn null_and_invalid_arguments_are_reported() {
        let mut handle: *mut DdImage = ptr::null_mut();
        let status =
            unsafe { dd_image_create(ptr::null(), 4, 4, 8, &mut handle) };
        assert_eq!(status, DdStatus::NullPointer);

        let data = [0.5; 16];
        let status = unsafe { dd_image_create(data.as_ptr(), 4, 4, 12, &mut handle) };
        assert_eq!(status, DdStatus::InvalidArgument);
        let message = unsafe { CStr::from_ptr(dd_last_error_message()) };
        assert!(message.to_str().unwrap().contains("bit depth"));

        let out_of_range = [1.5; 16];
        let status =
            unsafe { dd_image_create(out_of_range.as_ptr(), 4, 4, 8, &mut handle) };
        assert_eq!(status, DdStatus::InvalidArgument);

        let image = make_image(4, 4, 0.5);
        let mut small = vec![0.0; 4];
        let status = unsafe { dd_image_data(image, small.as_mut_ptr(), small.len()) };
        assert_eq!(status, DdStatus::InvalidArgument);
        unsafe { dd_image_free(image) };
    }

    #[test]
    fn load_failures_map_to_io_status() {
        let path = CString::new("/nonexistent/dir/missing.pgm").unwrap();
        let mut handle: *mut DdImage = ptr::null_mut();
        let status = unsafe { dd_image_load(path.as_ptr(), &mut handle) };
        assert_eq!(status, DdStatus::Io);
        assert!(handle.is_null());
        assert!(!dd_last_error_message().is_null());
    }

    #[test]
    fn save_and_load_round_trip_through_a_file() {
        let image = make_image(6, 8, 0.25);
        let dir = std::env::temp_dir().join(format!("dd-ffi-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("round-trip.pgm");
        let c_path = CString::new(path.to_str().unwrap()).unwrap();

        let status = unsafe { dd_image_save(image, c_path.as_ptr()) };
        assert_eq!(status, DdStatus::Ok);

        let mut loaded: *mut DdImage = ptr::null_mut();
        let status = unsafe { dd_image_load(c_path.as_ptr(), &mut loaded) };
        assert_eq!(status, DdStatus::Ok);

        let mut copied = vec![0.0; 48];
        let status = unsafe { dd_image_data(loaded, copied.as_mut_ptr(), copied.len()) };
        assert_eq!(status, DdStatus::Ok);
        let expected = (0.25f64 * 255.0).round() / 255.0;
        assert!(copied.iter().all(|&v| (v - expected).abs() < 1e-12));

        unsafe {
            dd_image_free(image);
            dd_image_free(loaded);
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn counting_matches_known_values() {
        let mut formula = 0.0;
        let status = unsafe { dd_count_tilings_formula(8, 8, &mut formula) };
        assert_eq!(status, DdStatus::Ok);
        assert_eq!(formula.round() as u64, 12_988_816);

        let mut text: *mut c_char = ptr::null_mut();
        let status = unsafe { dd_count_tilings_exact(8, 8, &mut text) };
        assert_eq!(status, DdStatus::Ok);
        let decimal = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
        unsafe { dd_string_free(text) };
        assert_eq!(decimal, "12988816");

        let status = unsafe { dd_count_tilings_exact(30, 30, &mut text) };
        assert_eq!(status, DdStatus::SizeLimit);

        let status = unsafe { dd_count_tilings_formula(0, 5, &mut formula) };
        assert_eq!(status, DdStatus::InvalidArgument);
    }

    #[test]
    fn denoise_produces_an_image_and_stats() {
        let mut data = vec![0.3; 16 * 16];
        for (k, value) in data.iter_mut().enumerate() {
            if (k / 16 + k % 16) % 3 == 0 {
                *value = 0.7;
            }
        }
        let mut handle: *mut DdImage = ptr::null_mut();
        let status = unsafe { dd_image_create(data.as_ptr(), 16, 16, 8, &mut handle) };
        assert_eq!(status, DdStatus::Ok);

        let mut options = DdDenoiseOptions {
            mode: DdMode::DominoDenoise,
            seed: 0,
            channels: 0,
            epoch_len: 0,
            patience: 0,
            max_iterations: 0,
            n2f_check_interval: 0,
            pair_strategy: DdPairStrategy::Domino,
        };
        let status =
            unsafe { dd_denoise_options_default(DdMode::DominoDenoise, 9, &mut options) };
        assert_eq!(status, DdStatus::Ok);
        assert_eq!(options.seed, 9);
        assert!(options.channels > 0 && options.epoch_len > 0);

        options.channels = 2;
        options.epoch_len = 4;
        options.patience = 2;
        options.max_iterations = 16;

        let mut denoised: *mut DdImage = ptr::null_mut();
        let mut stats = DdRunStats {
            iterations: 0,
            epochs: 0,
            best_epoch: 0,
            halting_epoch: 0,
            unresolved_pixels: 0,
            psnr_vs_input: 0.0,
        };
        let status = unsafe { dd_denoise(handle, &options, &mut denoised, &mut stats) };
        assert_eq!(status, DdStatus::Ok);
        assert!(!denoised.is_null());
        assert_eq!(stats.iterations, 16);
        assert_eq!(stats.halting_epoch, -1);
        assert!(stats.psnr_vs_input.is_finite());

        let (mut height, mut width) = (0usize, 0usize);
        unsafe {
            assert_eq!(dd_image_height(denoised, &mut height), DdStatus::Ok);
            assert_eq!(dd_image_width(denoised, &mut width), DdStatus::Ok);
            dd_image_free(denoised);
            dd_image_free(handle);
        }
        assert_eq!((height, width), (16, 16));
    }

    #[test]
    fn denoise_rejects_zero_counts() {
        let image = make_image(16, 16, 0.5);
        let options = DdDenoiseOptions {
            mode: DdMode::DominoDenoise,
            seed: 1,
            channels: 0,
            epoch_len: 4,
            patience: 2,
            max_iterations: 16,
            n2f_check_interval: 4,
            pair_strategy: DdPairStrategy::Domino,
        };
        let mut denoised: *mut DdImage = ptr::null_mut();
        let status =
            unsafe { dd_denoise(image, &options, &mut denoised, ptr::null_mut()) };
        assert_eq!(status, DdStatus::InvalidArgument);
        assert!(denoised.is_null());
        unsafe { dd_image_free(image) };
    }
}
