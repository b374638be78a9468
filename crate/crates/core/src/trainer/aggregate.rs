//! Per-pixel output averaging.
//!
//! Every forward pass contributes its prediction at the pixels that
//! were visible to the network; the running average of those
//! contributions is the assembled output. Pixels that were never
//! visible stay unresolved and need a fallback value.

use crate::nnet::MaskTensor;

/// Running per-pixel sums and observation counts.
#[derive(Debug, Clone)]
pub struct Aggregator {
    height: usize,
    width: usize,
    sum: Vec<f64>,
    count: Vec<u64>,
}

impl Aggregator {
    pub fn new(height: usize, width: usize) -> Aggregator {
        Aggregator {
            height,
            width,
            sum: vec![0.0; height * width],
            count: vec![0; height * width],
        }
    }

    /// Adds `values` at every pixel where `mask` is one.
    pub fn push(&mut self, values: &[f64], mask: &MaskTensor) {
        assert_eq!(values.len(), self.sum.len(), "value plane shape mismatch");
        assert_eq!(
            (mask.height(), mask.width()),
            (self.height, self.width),
            "mask shape mismatch"
        );
        for ((sum, count), (value, live)) in self
            .sum
            .iter_mut()
            .zip(self.count.iter_mut())
            .zip(values.iter().zip(mask.data()))
        {
            if *live == 1.0 {
                *sum += value;
                *count += 1;
            }
        }
    }

    pub fn reset(&mut self) {
        self.sum.fill(0.0);
        self.count.fill(0);
    }

    /// Mean at pixel `index`, or `None` while unresolved.
    pub fn mean(&self, index: usize) -> Option<f64> {
        (self.count[index] > 0).then(|| self.sum[index] / self.count[index] as f64)
    }

    pub fn counts(&self) -> &[u64] {
        &self.count
    }

    /// The averaged plane with unresolved pixels taken from `fallback`,
    /// plus how many needed the fallback.
    pub fn average_with_fallback(&self, fallback: &[f64]) -> (Vec<f64>, u64) {
        assert_eq!(fallback.len(), self.sum.len(), "fallback shape mismatch");
        let mut unresolved = 0;
        let plane = self
            .sum
            .iter()
            .zip(&self.count)
            .zip(fallback)
            .map(|((sum, count), fb)| {
                if *count > 0 {
                    sum / *count as f64
                } else {
                    unresolved += 1;
                    *fb
                }
            })
            .collect();
        (plane, unresolved)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averages_accumulate_only_where_the_mask_is_live() {
        let mut agg = Aggregator::new(1, 3);
        let mut mask = MaskTensor::ones(1, 3);
        mask.set(0, 2, false);
        agg.push(&[0.25, 0.5, 0.9], &mask);
        agg.push(&[0.75, 1.0, 0.9], &mask);
        assert_eq!(agg.mean(0), Some(0.5));
        assert_eq!(agg.mean(1), Some(0.75));
        assert_eq!(agg.mean(2), None);
        assert_eq!(agg.counts(), &[2, 2, 0]);
    }

    #[test]
    fn fallback_fills_unresolved_pixels_and_counts_them() {
        let mut agg = Aggregator::new(2, 2);
        let mut mask = MaskTensor::zeros(2, 2);
        mask.set(0, 0, true);
        agg.push(&[0.5, 0.1, 0.1, 0.1], &mask);
        let (plane, unresolved) = agg.average_with_fallback(&[0.9, 0.8, 0.7, 0.6]);
        assert_eq!(plane, vec![0.5, 0.8, 0.7, 0.6]);
        assert_eq!(unresolved, 3);
    }

    #[test]
    fn reset_clears_all_state() {
        let mut agg = Aggregator::new(1, 2);
        agg.push(&[0.3, 0.4], &MaskTensor::ones(1, 2));
        agg.reset();
        assert_eq!(agg.mean(0), None);
        let (plane, unresolved) = agg.average_with_fallback(&[0.1, 0.2]);
        assert_eq!(plane, vec![0.1, 0.2]);
        assert_eq!(unresolved, 2);
    }
}
