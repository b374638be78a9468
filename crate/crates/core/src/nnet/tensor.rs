//! Dense activation tensors and binary masks.

use crate::error::DenoiseError;
use crate::imaging::{BitDepth, Image};

/// A `(channels, height, width)` stack of double-precision planes,
/// stored channel-major then row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(channels: usize, height: usize, width: usize) -> Tensor {
        Tensor {
            channels,
            height,
            width,
            data: vec![0.0; channels * height * width],
        }
    }

    pub fn from_data(
        channels: usize,
        height: usize,
        width: usize,
        data: Vec<f64>,
    ) -> Result<Tensor, DenoiseError> {
        if data.len() != channels * height * width {
            return Err(DenoiseError::ShapeMismatch(format!(
                "tensor data length {} does not match {}x{}x{}",
                data.len(),
                channels,
                height,
                width
            )));
        }
        Ok(Tensor {
            channels,
            height,
            width,
            data,
        })
    }

    /// Single-channel tensor holding an image's intensities.
    pub fn from_image(img: &Image) -> Tensor {
        Tensor {
            channels: 1,
            height: img.height(),
            width: img.width(),
            data: img.data().to_vec(),
        }
    }

    /// Converts a single-channel tensor back into an image, clamping
    /// into `[0, 1]`.
    pub fn to_image(&self, bit_depth: BitDepth) -> Result<Image, DenoiseError> {
        if self.channels != 1 {
            return Err(DenoiseError::ShapeMismatch(format!(
                "expected a single-channel tensor, got {} channels",
                self.channels
            )));
        }
        Image::from_data_clamped(self.height, self.width, self.data.clone(), bit_depth)
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// One channel plane as a flat `height * width` slice.
    pub fn plane(&self, channel: usize) -> &[f64] {
        let size = self.height * self.width;
        &self.data[channel * size..(channel + 1) * size]
    }

    pub fn plane_mut(&mut self, channel: usize) -> &mut [f64] {
        let size = self.height * self.width;
        &mut self.data[channel * size..(channel + 1) * size]
    }

    pub fn same_shape(&self, other: &Tensor) -> bool {
        self.channels == other.channels
            && self.height == other.height
            && self.width == other.width
    }
}

/// A single-channel binary mask; 1 marks a live pixel, 0 a hidden one.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskTensor {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl MaskTensor {
    pub fn ones(height: usize, width: usize) -> MaskTensor {
        MaskTensor {
            height,
            width,
            data: vec![1.0; height * width],
        }
    }

    pub fn zeros(height: usize, width: usize) -> MaskTensor {
        MaskTensor {
            height,
            width,
            data: vec![0.0; height * width],
        }
    }

    /// Builds a mask from raw values, which must all be exactly 0 or 1.
    pub fn from_data(height: usize, width: usize, data: Vec<f64>) -> Result<MaskTensor, DenoiseError> {
        if data.len() != height * width {
            return Err(DenoiseError::ShapeMismatch(format!(
                "mask data length {} does not match {}x{}",
                data.len(),
                height,
                width
            )));
        }
        if let Some(bad) = data.iter().find(|v| **v != 0.0 && **v != 1.0) {
            return Err(DenoiseError::ShapeMismatch(format!(
                "mask entries must be binary, found {bad}"
            )));
        }
        Ok(MaskTensor {
            height,
            width,
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.width + j] != 0.0
    }

    pub fn set(&mut self, i: usize, j: usize, live: bool) {
        self.data[i * self.width + j] = if live { 1.0 } else { 0.0 };
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|v| **v == 1.0).count()
    }
}
