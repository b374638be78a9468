//! The main training loop with domino-tiling validation.
//!
//! Each iteration trains on a freshly masked copy of the noisy image
//! and pushes the visible predictions into a cumulative average. In
//! parallel, one of the two parity-filled images is masked the same
//! way, forwarded, and averaged per epoch; comparing each epoch's
//! per-pixel errors against the previous epoch yields the raw metric
//! the halting monitor smooths. The returned image is the cumulative
//! average as it stood at the smoothed minimum, not at the end.

use std::collections::VecDeque;

use rand::Rng;

use super::aggregate::Aggregator;
use super::halting::HaltingMonitor;
use super::masks::{sample_masks, MaskPlan};
use super::{make_pair, DenoiseConfig, Mode, RunReport};
use crate::error::DenoiseError;
use crate::imaging::{psnr, Image};
use crate::nnet::{adam_step, apply_mask, bce_loss, init_network, AdamState, Tensor};
use crate::rng;

/// One stored cumulative-average image.
#[derive(Clone)]
struct Snapshot {
    epoch: usize,
    plane: Vec<f64>,
    unresolved: u64,
}

/// Denoises `img` in the masked self-prediction mode.
pub fn denoise(img: &Image, cfg: &DenoiseConfig) -> Result<(Image, RunReport), DenoiseError> {
    cfg.validate()?;
    if cfg.mode != Mode::DominoDenoise {
        return Err(DenoiseError::InvalidArgument(format!(
            "denoise expects the dd mode, got {}",
            cfg.mode.as_str()
        )));
    }
    let (height, width) = (img.height(), img.width());
    let (even_filled, odd_filled) = make_pair(img, cfg.pair_strategy, cfg.seed)?;
    let x = Tensor::from_image(img);
    let even_x = Tensor::from_image(&even_filled);
    let odd_x = Tensor::from_image(&odd_filled);

    let plan = MaskPlan::default();
    let mut net = init_network(cfg.seed, cfg.channels);
    let mut adam = AdamState::new(&net);

    let mut cumulative = Aggregator::new(height, width);
    let mut val_even = Aggregator::new(height, width);
    let mut val_odd = Aggregator::new(height, width);
    let mut prev_errors: Option<[Vec<Option<f64>>; 2]> = None;
    let mut monitor = HaltingMonitor::new(cfg.patience);
    // Deep enough that the minimizing epoch is still present when the
    // verdict lands, 7 smoothing epochs plus `patience` later.
    let ring_cap = cfg.patience + 8;
    let mut ring: VecDeque<Snapshot> = VecDeque::new();

    let mut epoch = 0usize;
    let mut iteration = 0u64;
    let mut halting_epoch = None;
    let mut halted_best = None;

    while iteration < cfg.max_iterations {
        iteration += 1;

        let mut mask_stream = rng::substream(cfg.seed, "mask", iteration);
        let (input_mask, loss_mask) = sample_masks(height, width, &plan, &mut mask_stream);
        let pass = net.forward(&apply_mask(&x, &input_mask), &input_mask)?;
        let loss = bce_loss(pass.output(), &x, &loss_mask)?;
        if !loss.is_finite() {
            return Err(DenoiseError::NonFiniteLoss(iteration));
        }
        let grads = net.backward(&pass, &x, &loss_mask)?;
        adam_step(&mut net, &grads, &mut adam)?;
        cumulative.push(pass.output().plane(0), &input_mask);

        let pick_even = rng::substream(cfg.seed, "valparity", iteration).gen::<bool>();
        let mut val_stream = rng::substream(cfg.seed, "valmask", iteration);
        let (val_mask, _) = sample_masks(height, width, &plan, &mut val_stream);
        let val_input = if pick_even { &even_x } else { &odd_x };
        let val_pass = net.forward(&apply_mask(val_input, &val_mask), &val_mask)?;
        let agg = if pick_even { &mut val_even } else { &mut val_odd };
        agg.push(val_pass.output().plane(0), &val_mask);

        if iteration.is_multiple_of(cfg.epoch_len as u64) {
            epoch += 1;
            // Each parity's epoch average is scored against the other
            // parity's filled image.
            let errors = [
                error_map(&val_even, odd_x.plane(0)),
                error_map(&val_odd, even_x.plane(0)),
            ];
            if let Some(previous) = &prev_errors {
                let q = fraction_increased(&errors, previous);
                if let Some(center) = monitor.push(q) {
                    halting_epoch = Some(epoch);
                    halted_best = Some(center + 2);
                }
            }
            prev_errors = Some(errors);
            val_even.reset();
            val_odd.reset();

            let (plane, unresolved) = cumulative.average_with_fallback(x.plane(0));
            ring.push_back(Snapshot {
                epoch,
                plane,
                unresolved,
            });
            if ring.len() > ring_cap {
                ring.pop_front();
            }
            if halted_best.is_some() {
                break;
            }
        }
    }

    let best_epoch = halted_best
        .or_else(|| monitor.best_center().map(|center| center + 2))
        .unwrap_or(epoch);
    let (plane, unresolved) = if best_epoch == 0 {
        cumulative.average_with_fallback(x.plane(0))
    } else {
        let snapshot = ring
            .iter()
            .find(|s| s.epoch == best_epoch)
            .expect("the ring retains the selected epoch");
        (snapshot.plane.clone(), snapshot.unresolved)
    };
    let out = Image::from_data(height, width, plane, img.bit_depth())?;
    let report = RunReport {
        mode: cfg.mode.as_str(),
        iterations: iteration,
        epochs: epoch,
        halting_epoch,
        best_epoch,
        q: monitor.raw().to_vec(),
        s: monitor.smoothed().to_vec(),
        unresolved_pixels: unresolved,
        psnr_vs_input: psnr(&out, img)?,
    };
    Ok((out, report))
}

/// Per-pixel squared error of an epoch average against `target`;
/// `None` where the aggregator saw nothing.
fn error_map(agg: &Aggregator, target: &[f64]) -> Vec<Option<f64>> {
    target
        .iter()
        .enumerate()
        .map(|(index, t)| agg.mean(index).map(|mean| (mean - t) * (mean - t)))
        .collect()
}

/// Fraction of pixels whose error rose since the previous epoch,
/// pooled over both parities and skipping pixels unresolved in either.
fn fraction_increased(
    current: &[Vec<Option<f64>>; 2],
    previous: &[Vec<Option<f64>>; 2],
) -> f64 {
    let mut increased = 0u64;
    let mut comparable = 0u64;
    for (now, then) in current.iter().zip(previous) {
        for (c, p) in now.iter().zip(then) {
            if let (Some(c), Some(p)) = (c, p) {
                comparable += 1;
                if c > p {
                    increased += 1;
                }
            }
        }
    }
    if comparable == 0 {
        0.0
    } else {
        increased as f64 / comparable as f64
    }
}
