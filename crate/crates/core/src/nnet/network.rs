//! The denoising network: twelve masked 3x3 stages and a sigmoid head.

use rand::Rng;

use super::conv::{apply_mask, MaskStats, PartialConv, KERNEL};
use super::tensor::{MaskTensor, Tensor};
use crate::error::DenoiseError;
use crate::rng;

/// Number of partial-convolution stages.
pub const DEPTH: usize = 12;
/// Default channel width.
pub const DEFAULT_CHANNELS: usize = 48;

/// Twelve partial convolutions with ReLU, closed by a 1x1 convolution
/// with sigmoid. Single channel in, single channel out, spatial shape
/// preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    channels: usize,
    layers: Vec<PartialConv>,
    head_weights: Vec<f64>,
    head_bias: f64,
}

/// Everything the backward pass needs from one forward evaluation.
///
/// Holding the caller's only route to the network output, it makes
/// "backward without a forward" unrepresentable.
pub struct ForwardPass {
    // activations[s] and masks[s] are stage s's input; the final
    // entries are the head input and the fully propagated mask.
    activations: Vec<Tensor>,
    masks: Vec<MaskTensor>,
    renorms: Vec<Vec<f64>>,
    output: Tensor,
}

impl ForwardPass {
    /// Network output: sigmoid probabilities in `(0, 1)`.
    pub fn output(&self) -> &Tensor {
        &self.output
    }
}

/// Parameter gradients in canonical block order: per stage weights then
/// bias, then head weights and head bias.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub(crate) blocks: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .fold(0.0, |acc, g| acc.max(g.abs()))
    }

    /// Gradient of the parameter addressed like [`Network::param`].
    pub fn param(&self, block: usize, offset: usize) -> f64 {
        self.blocks[block][offset]
    }
}

/// He-uniform initialization: weights drawn from
/// `U(-sqrt(6 / fan_in), +sqrt(6 / fan_in))`, biases zero,
/// deterministic per seed.
pub fn init_network(seed: u64, channels: usize) -> Network {
    init_network_with_depth(seed, channels, DEPTH)
}

/// [`init_network`] with a custom stage count. Checkpoints only cover
/// the default depth; shallow networks exist for tests and diagnostics.
pub fn init_network_with_depth(seed: u64, channels: usize, depth: usize) -> Network {
    assert!(channels >= 1, "channel width must be at least 1");
    assert!(depth >= 1, "stage count must be at least 1");
    let mut stream = rng::substream(seed, "init", 0);
    let mut draw = |count: usize, fan_in: usize| -> Vec<f64> {
        let limit = (6.0 / fan_in as f64).sqrt();
        (0..count)
            .map(|_| (stream.gen::<f64>() * 2.0 - 1.0) * limit)
            .collect()
    };
    let mut layers = Vec::with_capacity(depth);
    for stage in 0..depth {
        let in_channels = if stage == 0 { 1 } else { channels };
        let fan_in = in_channels * KERNEL * KERNEL;
        let weights = draw(channels * in_channels * KERNEL * KERNEL, fan_in);
        layers.push(
            PartialConv::new(in_channels, channels, weights, vec![0.0; channels])
                .expect("initializer shapes are consistent"),
        );
    }
    let head_weights = draw(channels, channels);
    Network {
        channels,
        layers,
        head_weights,
        head_bias: 0.0,
    }
}

impl Network {
    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Runs the network on a single-channel input under `mask`,
    /// capturing the intermediate state backward needs.
    pub fn forward(&self, x: &Tensor, mask: &MaskTensor) -> Result<ForwardPass, DenoiseError> {
        if x.channels() != 1 {
            return Err(DenoiseError::ShapeMismatch(format!(
                "network input must have one channel, got {}",
                x.channels()
            )));
        }
        let depth = self.depth();
        let mut activations = Vec::with_capacity(depth + 1);
        let mut masks = Vec::with_capacity(depth + 1);
        let mut renorms = Vec::with_capacity(depth);
        let mut current = x.clone();
        let mut current_mask = mask.clone();
        for layer in &self.layers {
            let (mut out, _, stats) = layer.forward_with_stats(&current, &current_mask)?;
            let MaskStats { mask_out, renorm } = stats;
            for value in out.data_mut() {
                if *value < 0.0 {
                    *value = 0.0;
                }
            }
            masks.push(std::mem::replace(&mut current_mask, mask_out));
            renorms.push(renorm);
            activations.push(std::mem::replace(&mut current, out));
        }
        // `activations` holds each stage's input; `current` is the last
        // stage's ReLU output feeding the head.
        let (height, width) = (x.height(), x.width());
        let mut output = Tensor::zeros(1, height, width);
        {
            let plane = output.plane_mut(0);
            for (channel, &weight) in self.head_weights.iter().enumerate() {
                for (value, &activation) in plane.iter_mut().zip(current.plane(channel)) {
                    *value += weight * activation;
                }
            }
            for value in plane.iter_mut() {
                *value = sigmoid(*value + self.head_bias);
            }
        }
        activations.push(current);
        masks.push(current_mask);
        Ok(ForwardPass {
            activations,
            masks,
            renorms,
            output,
        })
    }

    /// Gradients of the masked BCE loss with respect to every weight
    /// and bias.
    ///
    /// The loss is the mean binary cross-entropy between the network
    /// output and `target` over the pixels selected by `loss_mask`;
    /// sigmoid and loss derivatives are folded into `(p - t) / n`.
    /// Mask renormalization factors are treated as constants.
    pub fn backward(
        &self,
        pass: &ForwardPass,
        target: &Tensor,
        loss_mask: &MaskTensor,
    ) -> Result<Gradients, DenoiseError> {
        if !target.same_shape(&pass.output) {
            return Err(DenoiseError::ShapeMismatch(
                "loss target shape does not match network output".into(),
            ));
        }
        if loss_mask.height() != target.height() || loss_mask.width() != target.width() {
            return Err(DenoiseError::ShapeMismatch(
                "loss mask shape does not match network output".into(),
            ));
        }
        let selected = loss_mask.count_ones();
        if selected == 0 {
            return Err(DenoiseError::EmptyLossMask);
        }

        let (height, width) = (target.height(), target.width());
        let scale = 1.0 / selected as f64;
        let mut output_grad = Tensor::zeros(1, height, width);
        {
            let plane = output_grad.plane_mut(0);
            let prediction = pass.output.plane(0);
            let truth = target.plane(0);
            for index in 0..height * width {
                let live = loss_mask.data()[index];
                plane[index] = (prediction[index] - truth[index]) * live * scale;
            }
        }

        let depth = self.depth();
        let last = &pass.activations[depth];
        let mut head_weight_grads = vec![0.0; self.channels];
        let head_bias_grad;
        let mut upstream = Tensor::zeros(self.channels, height, width);
        {
            let out_plane = output_grad.plane(0);
            head_bias_grad = out_plane.iter().sum::<f64>();
            for (channel, grad) in head_weight_grads.iter_mut().enumerate() {
                *grad = out_plane
                    .iter()
                    .zip(last.plane(channel))
                    .map(|(g, a)| g * a)
                    .sum();
                let weight = self.head_weights[channel];
                for (value, &g) in upstream.plane_mut(channel).iter_mut().zip(out_plane) {
                    *value = weight * g;
                }
            }
        }

        let mut stage_grads: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(depth);
        for stage in (0..depth).rev() {
            let layer = &self.layers[stage];
            let stage_out = &pass.activations[stage + 1];
            let stage_in = &pass.activations[stage];
            let stage_mask = &pass.masks[stage];
            // Gate by the ReLU: activations are its outputs, so
            // positive means the unit was live.
            for (channel_grad, activation) in
                upstream.data_mut().iter_mut().zip(stage_out.data())
            {
                if *activation <= 0.0 {
                    *channel_grad = 0.0;
                }
            }
            let masked = apply_mask(stage_in, stage_mask);
            let (input_grad, weight_grads, bias_grads) =
                layer.backward(&upstream, &masked, &pass.renorms[stage], stage_mask);
            stage_grads.push((weight_grads, bias_grads));
            upstream = input_grad;
        }

        let mut blocks = Vec::with_capacity(2 * depth + 2);
        for (weight_grads, bias_grads) in stage_grads.into_iter().rev() {
            blocks.push(weight_grads);
            blocks.push(bias_grads);
        }
        blocks.push(head_weight_grads);
        blocks.push(vec![head_bias_grad]);
        Ok(Gradients { blocks })
    }

    /// Number of parameter blocks (per stage weights and bias, then the
    /// head pair).
    pub fn num_blocks(&self) -> usize {
        2 * self.depth() + 2
    }

    pub(crate) fn block(&self, index: usize) -> &[f64] {
        let depth = self.depth();
        let stage = index / 2;
        if stage < depth {
            if index.is_multiple_of(2) {
                self.layers[stage].weights()
            } else {
                self.layers[stage].bias()
            }
        } else if index == 2 * depth {
            &self.head_weights
        } else {
            std::slice::from_ref(&self.head_bias)
        }
    }

    pub(crate) fn block_mut(&mut self, index: usize) -> &mut [f64] {
        let depth = self.depth();
        let stage = index / 2;
        if stage < depth {
            if index.is_multiple_of(2) {
                self.layers[stage].weights_mut()
            } else {
                self.layers[stage].bias_mut()
            }
        } else if index == 2 * depth {
            &mut self.head_weights
        } else {
            std::slice::from_mut(&mut self.head_bias)
        }
    }

    /// Reads one parameter; `block` and `offset` follow the canonical
    /// block order. Intended for diagnostics and tests.
    pub fn param(&self, block: usize, offset: usize) -> f64 {
        self.block(block)[offset]
    }

    pub fn set_param(&mut self, block: usize, offset: usize, value: f64) {
        self.block_mut(block)[offset] = value;
    }

    pub fn block_len(&self, block: usize) -> usize {
        self.block(block).len()
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}
