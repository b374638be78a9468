//! 3x3 partial convolutions with mask renormalization.

use super::tensor::{MaskTensor, Tensor};
use crate::error::DenoiseError;

/// Kernel side length; all partial convolutions are 3x3, stride 1,
/// same padding.
pub(crate) const KERNEL: usize = 3;
/// Window area used as the renormalization numerator.
pub(crate) const WINDOW: f64 = (KERNEL * KERNEL) as f64;

/// One partial-convolution layer.
///
/// Weights are laid out `[out_channel][in_channel][ki][kj]`, one bias
/// per output channel.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialConv {
    in_channels: usize,
    out_channels: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

/// Per-position mask statistics of one layer application: the
/// propagated mask and the factor `K / sum(m)` (0 where the whole
/// window is masked).
pub(crate) struct MaskStats {
    pub mask_out: MaskTensor,
    pub renorm: Vec<f64>,
}

impl PartialConv {
    pub fn new(in_channels: usize, out_channels: usize, weights: Vec<f64>, bias: Vec<f64>) -> Result<PartialConv, DenoiseError> {
        if weights.len() != out_channels * in_channels * KERNEL * KERNEL
            || bias.len() != out_channels
        {
            return Err(DenoiseError::ShapeMismatch(format!(
                "partial conv parameter sizes do not match {in_channels} in / {out_channels} out"
            )));
        }
        Ok(PartialConv {
            in_channels,
            out_channels,
            weights,
            bias,
        })
    }

    pub fn in_channels(&self) -> usize {
        self.in_channels
    }

    pub fn out_channels(&self) -> usize {
        self.out_channels
    }

    pub(crate) fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub(crate) fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub(crate) fn bias_mut(&mut self) -> &mut [f64] {
        &mut self.bias
    }

    #[inline]
    fn weight_at(&self, out_c: usize, in_c: usize, ki: usize, kj: usize) -> f64 {
        self.weights[((out_c * self.in_channels + in_c) * KERNEL + ki) * KERNEL + kj]
    }

    /// Applies the layer: `y = W (x . m) (K / sum m) + b` wherever the
    /// 3x3 window holds at least one live pixel, `y = 0` (bias
    /// excluded) where it holds none. Out-of-bounds taps count as
    /// masked. Also returns the propagated mask.
    pub fn forward(
        &self,
        x: &Tensor,
        mask: &MaskTensor,
    ) -> Result<(Tensor, MaskTensor), DenoiseError> {
        let (out, _, stats) = self.forward_with_stats(x, mask)?;
        Ok((out, stats.mask_out))
    }

    /// Forward pass that also hands back the masked input and the mask
    /// statistics the backward pass needs.
    pub(crate) fn forward_with_stats(
        &self,
        x: &Tensor,
        mask: &MaskTensor,
    ) -> Result<(Tensor, Tensor, MaskStats), DenoiseError> {
        if x.channels() != self.in_channels {
            return Err(DenoiseError::ShapeMismatch(format!(
                "partial conv expects {} input channels, got {}",
                self.in_channels,
                x.channels()
            )));
        }
        if x.height() != mask.height() || x.width() != mask.width() {
            return Err(DenoiseError::ShapeMismatch(format!(
                "mask {}x{} does not match input {}x{}",
                mask.height(),
                mask.width(),
                x.height(),
                x.width()
            )));
        }
        let stats = mask_stats(mask);
        let masked = apply_mask(x, mask);
        let mut out = Tensor::zeros(self.out_channels, x.height(), x.width());
        for out_c in 0..self.out_channels {
            for in_c in 0..self.in_channels {
                for ki in 0..KERNEL {
                    for kj in 0..KERNEL {
                        let weight = self.weight_at(out_c, in_c, ki, kj);
                        if weight == 0.0 {
                            continue;
                        }
                        accumulate_shifted(
                            out.plane_mut(out_c),
                            masked.plane(in_c),
                            x.height(),
                            x.width(),
                            ki,
                            kj,
                            weight,
                        );
                    }
                }
            }
            let bias = self.bias[out_c];
            let plane = out.plane_mut(out_c);
            for (value, &factor) in plane.iter_mut().zip(&stats.renorm) {
                *value = if factor > 0.0 {
                    *value * factor + bias
                } else {
                    0.0
                };
            }
        }
        Ok((out, masked, stats))
    }

    /// Reverse-mode step for this layer.
    ///
    /// `upstream` is the loss gradient at the layer output (already
    /// gated by the activation); `masked` and `renorm` are the values
    /// captured by [`PartialConv::forward_with_stats`]. Returns the
    /// gradient with respect to the unmasked layer input alongside the
    /// weight and bias gradients. The renormalization factors are
    /// treated as constants.
    pub(crate) fn backward(
        &self,
        upstream: &Tensor,
        masked: &Tensor,
        renorm: &[f64],
        input_mask: &MaskTensor,
    ) -> (Tensor, Vec<f64>, Vec<f64>) {
        let (height, width) = (upstream.height(), upstream.width());
        let mut rescaled = upstream.clone();
        for out_c in 0..self.out_channels {
            let plane = rescaled.plane_mut(out_c);
            for (value, &factor) in plane.iter_mut().zip(renorm) {
                *value *= factor;
            }
        }

        let bias_grads: Vec<f64> = (0..self.out_channels)
            .map(|out_c| upstream.plane(out_c).iter().sum())
            .collect();
        let mut weight_grads = vec![0.0; self.weights.len()];
        for out_c in 0..self.out_channels {
            for in_c in 0..self.in_channels {
                for ki in 0..KERNEL {
                    for kj in 0..KERNEL {
                        let index =
                            ((out_c * self.in_channels + in_c) * KERNEL + ki) * KERNEL + kj;
                        weight_grads[index] = dot_shifted(
                            rescaled.plane(out_c),
                            masked.plane(in_c),
                            height,
                            width,
                            ki,
                            kj,
                        );
                    }
                }
            }
        }

        let mut input_grad = Tensor::zeros(self.in_channels, height, width);
        for out_c in 0..self.out_channels {
            for in_c in 0..self.in_channels {
                for ki in 0..KERNEL {
                    for kj in 0..KERNEL {
                        let weight = self.weight_at(out_c, in_c, ki, kj);
                        if weight == 0.0 {
                            continue;
                        }
                        accumulate_transposed(
                            input_grad.plane_mut(in_c),
                            rescaled.plane(out_c),
                            height,
                            width,
                            ki,
                            kj,
                            weight,
                        );
                    }
                }
            }
        }
        for in_c in 0..self.in_channels {
            for (value, &live) in input_grad.plane_mut(in_c).iter_mut().zip(input_mask.data()) {
                *value *= live;
            }
        }
        (input_grad, weight_grads, bias_grads)
    }
}

/// Propagated mask and renormalization factors for one 3x3 window
/// sweep; out-of-bounds taps are treated as masked.
pub(crate) fn mask_stats(mask: &MaskTensor) -> MaskStats {
    let (height, width) = (mask.height(), mask.width());
    let mut window_sum = vec![0.0f64; height * width];
    for ki in 0..KERNEL {
        for kj in 0..KERNEL {
            accumulate_shifted(&mut window_sum, mask.data(), height, width, ki, kj, 1.0);
        }
    }
    let mut mask_out = MaskTensor::zeros(height, width);
    let mut renorm = vec![0.0f64; height * width];
    for index in 0..height * width {
        if window_sum[index] > 0.0 {
            renorm[index] = WINDOW / window_sum[index];
            mask_out.set(index / width, index % width, true);
        }
    }
    MaskStats { mask_out, renorm }
}

/// Input gated by the mask, channel by channel.
pub(crate) fn apply_mask(x: &Tensor, mask: &MaskTensor) -> Tensor {
    let mut masked = x.clone();
    for channel in 0..x.channels() {
        for (value, &live) in masked.plane_mut(channel).iter_mut().zip(mask.data()) {
            *value *= live;
        }
    }
    masked
}

/// `dst(i, j) += a * src(i + ki - 1, j + kj - 1)` over the positions
/// where the shifted source index is in bounds.
fn accumulate_shifted(
    dst: &mut [f64],
    src: &[f64],
    height: usize,
    width: usize,
    ki: usize,
    kj: usize,
    a: f64,
) {
    let (di, dj) = (ki as isize - 1, kj as isize - 1);
    for i in 0..height {
        let si = i as isize + di;
        if si < 0 || si >= height as isize {
            continue;
        }
        let (j0, j1) = shifted_range(width, dj);
        let dst_row = &mut dst[i * width + j0..i * width + j1];
        let src_start = (si as usize) * width + (j0 as isize + dj) as usize;
        let src_row = &src[src_start..src_start + (j1 - j0)];
        for (d, s) in dst_row.iter_mut().zip(src_row) {
            *d += a * s;
        }
    }
}

/// `dst(i + ki - 1, j + kj - 1) += a * src(i, j)`: the transpose of
/// [`accumulate_shifted`], used for input gradients.
fn accumulate_transposed(
    dst: &mut [f64],
    src: &[f64],
    height: usize,
    width: usize,
    ki: usize,
    kj: usize,
    a: f64,
) {
    let (di, dj) = (ki as isize - 1, kj as isize - 1);
    for i in 0..height {
        let ti = i as isize + di;
        if ti < 0 || ti >= height as isize {
            continue;
        }
        let (j0, j1) = shifted_range(width, dj);
        let src_row = &src[i * width + j0..i * width + j1];
        let dst_start = (ti as usize) * width + (j0 as isize + dj) as usize;
        let dst_row = &mut dst[dst_start..dst_start + (j1 - j0)];
        for (d, s) in dst_row.iter_mut().zip(src_row) {
            *d += a * s;
        }
    }
}

/// `sum over (i, j) of a(i, j) * b(i + ki - 1, j + kj - 1)` over
/// in-bounds positions, used for weight gradients.
fn dot_shifted(a: &[f64], b: &[f64], height: usize, width: usize, ki: usize, kj: usize) -> f64 {
    let (di, dj) = (ki as isize - 1, kj as isize - 1);
    let mut total = 0.0;
    for i in 0..height {
        let si = i as isize + di;
        if si < 0 || si >= height as isize {
            continue;
        }
        let (j0, j1) = shifted_range(width, dj);
        let a_row = &a[i * width + j0..i * width + j1];
        let b_start = (si as usize) * width + (j0 as isize + dj) as usize;
        let b_row = &b[b_start..b_start + (j1 - j0)];
        total += a_row.iter().zip(b_row).map(|(x, y)| x * y).sum::<f64>();
    }
    total
}

/// Destination column range `[j0, j1)` for which `j + dj` stays inside
/// `[0, width)`.
fn shifted_range(width: usize, dj: isize) -> (usize, usize) {
    let j0 = if dj < 0 { (-dj) as usize } else { 0 };
    let j1 = if dj > 0 { width - dj as usize } else { width };
    (j0, j1)
}
