//! Leaky blind-spot mask sampling.
//!
//! Each iteration hides a fixed-size random pixel subset `P` from the
//! network input and trains on `P` plus a small leaked subset `P0` of
//! the visible pixels, so the loss stays anchored to a little ground
//! truth the network can actually see.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::DenoiseError;
use crate::nnet::MaskTensor;

/// Masking rates for one training run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskPlan {
    /// Fraction of pixels hidden from the input per iteration.
    pub mask_rate: f64,
    /// Fraction of the remaining visible pixels leaked into the loss.
    pub leak_rate: f64,
}

impl Default for MaskPlan {
    fn default() -> Self {
        MaskPlan {
            mask_rate: 0.20,
            leak_rate: 0.001,
        }
    }
}

impl MaskPlan {
    pub fn new(mask_rate: f64, leak_rate: f64) -> Result<MaskPlan, DenoiseError> {
        if !(mask_rate > 0.0 && mask_rate < 1.0) {
            return Err(DenoiseError::InvalidArgument(format!(
                "mask rate must lie strictly between 0 and 1, got {mask_rate}"
            )));
        }
        if !(0.0..1.0).contains(&leak_rate) {
            return Err(DenoiseError::InvalidArgument(format!(
                "leak rate must lie in [0, 1), got {leak_rate}"
            )));
        }
        Ok(MaskPlan {
            mask_rate,
            leak_rate,
        })
    }

    /// Exact pixel budgets for an image of `total` pixels:
    /// `(hidden, leaked)` with `hidden = floor(mask_rate * total)` and
    /// `leaked = floor(leak_rate * (total - hidden))`.
    pub fn budgets(&self, total: usize) -> (usize, usize) {
        let hidden = (self.mask_rate * total as f64).floor() as usize;
        let leaked = (self.leak_rate * (total - hidden) as f64).floor() as usize;
        (hidden, leaked)
    }
}

/// Draws one iteration's masks from `stream`.
///
/// Returns `(input_mask, loss_mask)`: the input mask is zero exactly on
/// the hidden set `P`, and the loss mask selects `P` plus the leaked
/// visible subset `P0`. Both subsets are uniform without replacement,
/// so the pair is fully determined by the stream state.
pub fn sample_masks<R: Rng>(
    height: usize,
    width: usize,
    plan: &MaskPlan,
    stream: &mut R,
) -> (MaskTensor, MaskTensor) {
    let total = height * width;
    let (hidden, leaked) = plan.budgets(total);
    let mut indices: Vec<u32> = (0..total as u32).collect();
    let (chosen, _) = indices.partial_shuffle(stream, hidden + leaked);

    let mut input_mask = MaskTensor::ones(height, width);
    let mut loss_mask = MaskTensor::zeros(height, width);
    for (rank, &pixel) in chosen.iter().enumerate() {
        let (i, j) = (pixel as usize / width, pixel as usize % width);
        if rank < hidden {
            input_mask.set(i, j, false);
        }
        loss_mask.set(i, j, true);
    }
    (input_mask, loss_mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn budgets_follow_floor_arithmetic() {
        let plan = MaskPlan::default();
        assert_eq!(plan.budgets(1000), (200, 0));
        assert_eq!(plan.budgets(10000), (2000, 8));
    }

    #[test]
    fn masks_hit_their_budgets_exactly() {
        let plan = MaskPlan::default();
        for trial in 0..20 {
            let mut stream = rng::substream(3, "mask", trial);
            let (input, loss) = sample_masks(100, 100, &plan, &mut stream);
            assert_eq!(input.count_ones(), 8000);
            assert_eq!(loss.count_ones(), 2008);
        }
    }

    #[test]
    fn loss_mask_covers_the_hidden_set() {
        let plan = MaskPlan::default();
        let mut stream = rng::substream(4, "mask", 0);
        let (input, loss) = sample_masks(60, 50, &plan, &mut stream);
        let mut leaked = 0;
        for (i, l) in input.data().iter().zip(loss.data()) {
            if *i == 0.0 {
                assert_eq!(*l, 1.0, "every hidden pixel must be in the loss set");
            } else if *l == 1.0 {
                leaked += 1;
            }
        }
        assert_eq!(leaked, 2); // floor(0.001 * 2400)
    }

    #[test]
    fn small_images_leak_nothing() {
        let plan = MaskPlan::default();
        let mut stream = rng::substream(5, "mask", 0);
        let (input, loss) = sample_masks(10, 10, &plan, &mut stream);
        assert_eq!(input.count_ones(), 80);
        assert_eq!(loss.count_ones(), 20);
        for (i, l) in input.data().iter().zip(loss.data()) {
            assert_eq!(*i == 0.0, *l == 1.0);
        }
    }

    #[test]
    fn sampling_is_stream_deterministic() {
        let plan = MaskPlan::default();
        let mut a = rng::substream(6, "mask", 11);
        let mut b = rng::substream(6, "mask", 11);
        let mut c = rng::substream(6, "mask", 12);
        let (ia, la) = sample_masks(16, 16, &plan, &mut a);
        let (ib, lb) = sample_masks(16, 16, &plan, &mut b);
        let (ic, _) = sample_masks(16, 16, &plan, &mut c);
        assert_eq!(ia.data(), ib.data());
        assert_eq!(la.data(), lb.data());
        assert_ne!(ia.data(), ic.data());
    }

    #[test]
    fn rates_are_validated() {
        assert!(MaskPlan::new(0.0, 0.001).is_err());
        assert!(MaskPlan::new(1.0, 0.001).is_err());
        assert!(MaskPlan::new(0.2, -0.1).is_err());
        assert!(MaskPlan::new(0.2, 1.0).is_err());
        assert!(MaskPlan::new(0.2, 0.0).is_ok());
    }
}
