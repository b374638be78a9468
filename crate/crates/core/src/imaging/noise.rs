//! Synthetic noise for benchmarking against a known clean image.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use super::Image;
use crate::error::DenoiseError;
use crate::rng;

/// Noise model applied to a clean image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    /// Additive Gaussian noise. `sigma` is expressed on the 8-bit scale,
    /// so the standard deviation applied to `[0, 1]` samples is
    /// `sigma / 255`.
    Gaussian { sigma: f64, seed: u64 },
    /// Poisson (shot) noise: each sample becomes
    /// `Poisson(x * peak) / peak`. Smaller peaks mean stronger noise.
    Poisson { peak: f64, seed: u64 },
}

impl NoiseSpec {
    /// Applies the noise model, clamping results back into `[0, 1]`.
    pub fn apply(&self, image: &Image) -> Result<Image, DenoiseError> {
        match *self {
            NoiseSpec::Gaussian { sigma, seed } => {
                if sigma < 0.0 || !sigma.is_finite() {
                    return Err(DenoiseError::InvalidArgument(format!(
                        "gaussian sigma must be non-negative and finite, got {sigma}"
                    )));
                }
                let mut stream = rng::substream(seed, "noise", 0);
                let std = sigma / 255.0;
                let data = image
                    .data()
                    .iter()
                    .map(|&x| {
                        let draw: f64 = stream.sample(StandardNormal);
                        x + draw * std
                    })
                    .collect();
                Image::from_data_clamped(image.height(), image.width(), data, image.bit_depth())
            }
            NoiseSpec::Poisson { peak, seed } => {
                if peak <= 0.0 || !peak.is_finite() {
                    return Err(DenoiseError::InvalidArgument(format!(
                        "poisson peak must be positive and finite, got {peak}"
                    )));
                }
                let mut stream = rng::substream(seed, "noise", 0);
                let data = image
                    .data()
                    .iter()
                    .map(|&x| {
                        let lambda = x * peak;
                        if lambda == 0.0 {
                            return 0.0;
                        }
                        let poisson = Poisson::new(lambda).expect("lambda is positive and finite");
                        poisson.sample(&mut stream) / peak
                    })
                    .collect();
                Image::from_data_clamped(image.height(), image.width(), data, image.bit_depth())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::BitDepth;

    fn flat(value: f64, side: usize) -> Image {
        Image::from_data(side, side, vec![value; side * side], BitDepth::Eight).unwrap()
    }

    #[test]
    fn gaussian_noise_is_reproducible_and_seed_sensitive() {
        let clean = flat(0.5, 16);
        let spec = NoiseSpec::Gaussian { sigma: 25.0, seed: 11 };
        let a = spec.apply(&clean).unwrap();
        let b = spec.apply(&clean).unwrap();
        assert_eq!(a, b);
        let c = NoiseSpec::Gaussian { sigma: 25.0, seed: 12 }.apply(&clean).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn gaussian_noise_matches_requested_scale() {
        let clean = flat(0.5, 128);
        let noisy = NoiseSpec::Gaussian { sigma: 25.0, seed: 3 }
            .apply(&clean)
            .unwrap();
        let n = noisy.data().len() as f64;
        let mean_shift: f64 = noisy
            .data()
            .iter()
            .zip(clean.data())
            .map(|(a, b)| a - b)
            .sum::<f64>()
            / n;
        let variance: f64 = noisy
            .data()
            .iter()
            .zip(clean.data())
            .map(|(a, b)| (a - b - mean_shift).powi(2))
            .sum::<f64>()
            / n;
        let expected_std = 25.0 / 255.0;
        assert!(mean_shift.abs() < 0.01, "mean shift {mean_shift}");
        assert!(
            (variance.sqrt() - expected_std).abs() < 0.01,
            "std {} vs {expected_std}",
            variance.sqrt()
        );
    }

    #[test]
    fn poisson_noise_keeps_black_pixels_black() {
        let clean = flat(0.0, 8);
        let noisy = NoiseSpec::Poisson { peak: 30.0, seed: 5 }.apply(&clean).unwrap();
        assert!(noisy.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn poisson_noise_mean_tracks_signal() {
        let clean = flat(0.5, 128);
        let noisy = NoiseSpec::Poisson { peak: 100.0, seed: 5 }.apply(&clean).unwrap();
        let mean: f64 = noisy.data().iter().sum::<f64>() / noisy.data().len() as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let clean = flat(0.5, 4);
        assert!(NoiseSpec::Gaussian { sigma: -1.0, seed: 0 }.apply(&clean).is_err());
        assert!(NoiseSpec::Gaussian { sigma: f64::NAN, seed: 0 }.apply(&clean).is_err());
        assert!(NoiseSpec::Poisson { peak: -1.0, seed: 0 }.apply(&clean).is_err());
        assert!(NoiseSpec::Poisson { peak: 0.0, seed: 0 }.apply(&clean).is_err());
    }

    #[test]
    fn zero_sigma_leaves_the_image_untouched() {
        let clean = flat(0.7, 8);
        let out = NoiseSpec::Gaussian { sigma: 0.0, seed: 3 }.apply(&clean).unwrap();
        assert_eq!(out.data(), clean.data());
    }
}
