//! The alternate mode: parity-filled images trained against each other.
//!
//! No masking is involved. The network maps the even-filled image to
//! the odd-filled one on odd iterations and the reverse on even ones;
//! every few hundred iterations it is scored by how well it reproduces
//! the original noisy image, and the weights from the best-scoring
//! check produce the final output.

use super::{make_pair, DenoiseConfig, Mode, RunReport};
use crate::error::DenoiseError;
use crate::imaging::{psnr, Image};
use crate::nnet::{adam_step, bce_loss, init_network, AdamState, MaskTensor, Network, Tensor};

/// Denoises `img` in the parity-pair training mode.
pub fn n2f_domino_denoise(
    img: &Image,
    cfg: &DenoiseConfig,
) -> Result<(Image, RunReport), DenoiseError> {
    cfg.validate()?;
    if cfg.mode != Mode::N2fDomino {
        return Err(DenoiseError::InvalidArgument(format!(
            "n2f_domino_denoise expects the n2f-domino mode, got {}",
            cfg.mode.as_str()
        )));
    }
    let (height, width) = (img.height(), img.width());
    let (even_filled, odd_filled) = make_pair(img, cfg.pair_strategy, cfg.seed)?;
    let x = Tensor::from_image(img);
    let even_x = Tensor::from_image(&even_filled);
    let odd_x = Tensor::from_image(&odd_filled);
    let ones = MaskTensor::ones(height, width);

    let mut net = init_network(cfg.seed, cfg.channels);
    let mut adam = AdamState::new(&net);

    let mut mse_trace = Vec::new();
    let mut best: Option<(usize, f64, Network)> = None;
    let mut stale = 0usize;
    let mut halting_check = None;
    let mut checks = 0usize;
    let mut iteration = 0u64;

    while iteration < cfg.max_iterations {
        iteration += 1;
        let (input, target) = if iteration % 2 == 1 {
            (&even_x, &odd_x)
        } else {
            (&odd_x, &even_x)
        };
        let pass = net.forward(input, &ones)?;
        let loss = bce_loss(pass.output(), target, &ones)?;
        if !loss.is_finite() {
            return Err(DenoiseError::NonFiniteLoss(iteration));
        }
        let grads = net.backward(&pass, target, &ones)?;
        adam_step(&mut net, &grads, &mut adam)?;

        if iteration.is_multiple_of(cfg.n2f_check_interval as u64) {
            checks += 1;
            let check_pass = net.forward(&x, &ones)?;
            let mse = mean_squared_error(check_pass.output().plane(0), x.plane(0));
            mse_trace.push(mse);
            match &best {
                Some((_, best_mse, _)) if mse >= *best_mse => {
                    stale += 1;
                    if stale >= cfg.patience {
                        halting_check = Some(checks);
                    }
                }
                _ => {
                    best = Some((checks, mse, net.clone()));
                    stale = 0;
                }
            }
            if halting_check.is_some() {
                break;
            }
        }
    }

    let (best_check, _, best_net) = best.unwrap_or((0, f64::INFINITY, net));
    let out_pass = best_net.forward(&x, &ones)?;
    let out = out_pass.output().to_image(img.bit_depth())?;
    let report = RunReport {
        mode: cfg.mode.as_str(),
        iterations: iteration,
        epochs: checks,
        halting_epoch: halting_check,
        best_epoch: best_check,
        q: mse_trace,
        s: Vec::new(),
        unresolved_pixels: 0,
        psnr_vs_input: psnr(&out, img)?,
    };
    Ok((out, report))
}

fn mean_squared_error(a: &[f64], b: &[f64]) -> f64 {
    let sum: f64 = a.iter().zip(b).map(|(a, b)| (a - b) * (a - b)).sum();
    sum / a.len() as f64
}
