//! Grayscale images, file IO, synthetic noise, and quality metrics.

mod io;
mod metrics;
mod noise;

pub use io::{load_image, save_image};
pub use metrics::{psnr, ssim};
pub use noise::NoiseSpec;

use crate::error::DenoiseError;

/// Bit depth an image was loaded from (and will be saved back to).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    /// Largest representable sample value at this depth.
    pub fn max_value(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }
}

/// A grayscale image with intensities normalized to `[0, 1]`.
///
/// Pixels are stored row-major; `(i, j)` addresses row `i`, column `j`.
/// The original bit depth is kept so a round trip through the crate
/// writes the same sample format it read.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    data: Vec<f64>,
    bit_depth: BitDepth,
}

impl Image {
    /// Builds an image from normalized intensities.
    ///
    /// Fails if `data.len() != height * width` or any sample falls
    /// outside `[0, 1]` (NaN included).
    pub fn from_data(
        height: usize,
        width: usize,
        data: Vec<f64>,
        bit_depth: BitDepth,
    ) -> Result<Self, DenoiseError> {
        if data.len() != height * width {
            return Err(DenoiseError::DimensionMismatch(
                height,
                width,
                data.len(),
                height * width,
            ));
        }
        for (index, &value) in data.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(DenoiseError::IntensityRange { index, value });
            }
        }
        Ok(Self {
            height,
            width,
            data,
            bit_depth,
        })
    }

    /// All-zero image of the given shape.
    pub fn zeros(height: usize, width: usize, bit_depth: BitDepth) -> Self {
        Self {
            height,
            width,
            data: vec![0.0; height * width],
            bit_depth,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bit_depth(&self) -> BitDepth {
        self.bit_depth
    }

    /// Row-major samples in `[0, 1]`.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Sample at row `i`, column `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.height && j < self.width);
        self.data[i * self.width + j]
    }

    /// Overwrites the sample at row `i`, column `j`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i < self.height && j < self.width);
        self.data[i * self.width + j] = value;
    }

    /// Replaces the sample buffer, clamping each value into `[0, 1]`.
    pub fn from_data_clamped(
        height: usize,
        width: usize,
        data: Vec<f64>,
        bit_depth: BitDepth,
    ) -> Result<Self, DenoiseError> {
        let clamped = data.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Self::from_data(height, width, clamped, bit_depth)
    }
}
