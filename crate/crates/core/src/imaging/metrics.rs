//! Image quality metrics: PSNR and SSIM.

use super::Image;
use crate::error::DenoiseError;

/// Peak signal-to-noise ratio in dB between two images of equal shape.
///
/// Intensities live in `[0, 1]`, so the peak is 1 and
/// `psnr = 10 * log10(1 / mse)`. Identical images yield `+inf`.
pub fn psnr(a: &Image, b: &Image) -> Result<f64, DenoiseError> {
    check_shapes(a, b)?;
    let n = a.data().len() as f64;
    let mse: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / n;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (1.0 / mse).log10())
}

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = 1.0e-4;
const SSIM_C2: f64 = 9.0e-4;

/// Mean structural similarity over all fully interior 11x11 windows.
///
/// Windows are weighted by a Gaussian with sigma 1.5 and the standard
/// stabilizers `C1 = (0.01)^2`, `C2 = (0.03)^2` for a unit dynamic
/// range. Both sides of each image must be at least 11 pixels.
pub fn ssim(a: &Image, b: &Image) -> Result<f64, DenoiseError> {
    check_shapes(a, b)?;
    let (height, width) = (a.height(), a.width());
    if height < SSIM_WINDOW || width < SSIM_WINDOW {
        return Err(DenoiseError::ImageTooSmall {
            height,
            width,
            min: SSIM_WINDOW,
        });
    }

    let weights = gaussian_window();
    let mut total = 0.0;
    let mut windows = 0usize;
    for top in 0..=(height - SSIM_WINDOW) {
        for left in 0..=(width - SSIM_WINDOW) {
            total += windowed_ssim(a, b, top, left, &weights);
            windows += 1;
        }
    }
    Ok(total / windows as f64)
}

fn check_shapes(a: &Image, b: &Image) -> Result<(), DenoiseError> {
    if a.height() != b.height() || a.width() != b.width() {
        return Err(DenoiseError::DimensionMismatch(
            a.height(),
            a.width(),
            b.height(),
            b.width(),
        ));
    }
    Ok(())
}

/// Unit-sum 11x11 Gaussian weights centered on the window.
fn gaussian_window() -> [f64; SSIM_WINDOW * SSIM_WINDOW] {
    let mut weights = [0.0; SSIM_WINDOW * SSIM_WINDOW];
    let center = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for (index, weight) in weights.iter_mut().enumerate() {
        let di = (index / SSIM_WINDOW) as f64 - center;
        let dj = (index % SSIM_WINDOW) as f64 - center;
        *weight = (-(di * di + dj * dj) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        sum += *weight;
    }
    for weight in &mut weights {
        *weight /= sum;
    }
    weights
}

fn windowed_ssim(a: &Image, b: &Image, top: usize, left: usize, weights: &[f64]) -> f64 {
    let mut mean_a = 0.0;
    let mut mean_b = 0.0;
    for (index, &w) in weights.iter().enumerate() {
        let i = top + index / SSIM_WINDOW;
        let j = left + index % SSIM_WINDOW;
        mean_a += w * a.get(i, j);
        mean_b += w * b.get(i, j);
    }
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    let mut covar = 0.0;
    for (index, &w) in weights.iter().enumerate() {
        let i = top + index / SSIM_WINDOW;
        let j = left + index % SSIM_WINDOW;
        let da = a.get(i, j) - mean_a;
        let db = b.get(i, j) - mean_b;
        var_a += w * da * da;
        var_b += w * db * db;
        covar += w * da * db;
    }
    let luminance = (2.0 * mean_a * mean_b + SSIM_C1) / (mean_a * mean_a + mean_b * mean_b + SSIM_C1);
    let contrast = (2.0 * covar + SSIM_C2) / (var_a + var_b + SSIM_C2);
    luminance * contrast
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::BitDepth;
    use rand::Rng;

    fn random_image(side: usize, seed: u64) -> Image {
        let mut stream = crate::rng::substream(seed, "test-image", 0);
        let data = (0..side * side).map(|_| stream.gen::<f64>()).collect();
        Image::from_data(side, side, data, BitDepth::Eight).unwrap()
    }

    #[test]
    fn psnr_of_identical_images_is_infinite() {
        let image = random_image(12, 1);
        assert_eq!(psnr(&image, &image).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_is_symmetric_and_matches_direct_mse() {
        let a = random_image(12, 2);
        let b = random_image(12, 3);
        let forward = psnr(&a, &b).unwrap();
        let backward = psnr(&b, &a).unwrap();
        assert_eq!(forward, backward);

        let mse: f64 = a
            .data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            / a.data().len() as f64;
        assert!((forward - 10.0 * (1.0 / mse).log10()).abs() < 1e-12);
    }

    #[test]
    fn psnr_known_value_for_uniform_offset() {
        let a = Image::from_data(4, 4, vec![0.5; 16], BitDepth::Eight).unwrap();
        let b = Image::from_data(4, 4, vec![0.6; 16], BitDepth::Eight).unwrap();
        // MSE = 0.01, so PSNR = 10 * log10(100) = 20 dB.
        assert!((psnr(&a, &b).unwrap() - 20.0).abs() < 1e-9);
    }

    #[test]
    fn ssim_of_identical_images_is_one() {
        let image = random_image(16, 4);
        assert!((ssim(&image, &image).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ssim_decreases_with_noise() {
        let clean = random_image(24, 5);
        let noisy = |sigma| {
            crate::imaging::NoiseSpec::Gaussian { sigma, seed: 9 }
                .apply(&clean)
                .unwrap()
        };
        let light_score = ssim(&clean, &noisy(5.0)).unwrap();
        let heavy_score = ssim(&clean, &noisy(50.0)).unwrap();
        assert!(light_score > heavy_score, "{light_score} vs {heavy_score}");
        assert!(heavy_score < 1.0);
    }

    #[test]
    fn ssim_rejects_small_images() {
        let image = random_image(8, 6);
        assert!(matches!(
            ssim(&image, &image),
            Err(DenoiseError::ImageTooSmall { .. })
        ));
    }

    #[test]
    fn metrics_reject_shape_mismatch() {
        let a = random_image(12, 7);
        let b = random_image(13, 7);
        assert!(psnr(&a, &b).is_err());
        assert!(ssim(&a, &b).is_err());
    }
}
