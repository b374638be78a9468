//! Smoothed early-stopping verdicts.
//!
//! The raw per-epoch metric is noisy, so verdicts run on a centered
//! 15-point rolling mean: the smoothed value for epoch `t` becomes
//! available only once the 7 subsequent raw values exist. Training
//! halts when the smoothed series has gone `patience` values without
//! a new strict minimum, and the minimizing epoch wins.

/// Raw values on each side of the smoothing window's center.
pub const SMOOTHING_RADIUS: usize = 7;

/// Consumes one raw metric value per epoch and reports when to stop.
#[derive(Debug, Clone)]
pub struct HaltingMonitor {
    patience: usize,
    raw: Vec<f64>,
    smoothed: Vec<f64>,
    best: Option<(usize, f64)>,
    stale: usize,
    verdict: Option<usize>,
}

impl HaltingMonitor {
    pub fn new(patience: usize) -> HaltingMonitor {
        assert!(patience >= 1, "patience must be at least 1");
        HaltingMonitor {
            patience,
            raw: Vec::new(),
            smoothed: Vec::new(),
            best: None,
            stale: 0,
            verdict: None,
        }
    }

    /// Feeds the next raw value. Returns the index (into the raw
    /// series) of the smoothed minimum once the halting rule fires,
    /// and keeps returning it on further pushes.
    pub fn push(&mut self, value: f64) -> Option<usize> {
        assert!(value.is_finite(), "halting metric must be finite");
        if self.verdict.is_some() {
            return self.verdict;
        }
        self.raw.push(value);
        let len = self.raw.len();
        if len < 2 * SMOOTHING_RADIUS + 1 {
            return None;
        }
        let center = len - 1 - SMOOTHING_RADIUS;
        let window = &self.raw[center - SMOOTHING_RADIUS..];
        let smoothed = window.iter().sum::<f64>() / window.len() as f64;
        self.smoothed.push(smoothed);
        match self.best {
            Some((_, best)) if smoothed >= best => {
                self.stale += 1;
                if self.stale >= self.patience {
                    self.verdict = Some(self.best.expect("stale implies a best").0);
                }
            }
            _ => {
                self.best = Some((center, smoothed));
                self.stale = 0;
            }
        }
        self.verdict
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn smoothed(&self) -> &[f64] {
        &self.smoothed
    }

    /// Index of the current smoothed minimum, if any value has been
    /// smoothed yet.
    pub fn best_center(&self) -> Option<usize> {
        self.best.map(|(center, _)| center)
    }

    pub fn verdict(&self) -> Option<usize> {
        self.verdict
    }
}
