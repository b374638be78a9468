//! Zero-shot training loops.
//!
//! Both modes train a fresh network on the single noisy input image,
//! with no clean data involved. The main mode hides a random fifth of
//! the pixels each iteration, predicts them from the rest, and stops
//! by watching a validation signal built from the two domino-filled
//! images; the alternate mode trains the even-filled and odd-filled
//! images directly against each other.

mod aggregate;
mod halting;
mod masks;
mod n2f;
mod run;

pub use aggregate::Aggregator;
pub use halting::{HaltingMonitor, SMOOTHING_RADIUS};
pub use masks::{sample_masks, MaskPlan};
pub use n2f::n2f_domino_denoise;
pub use run::denoise;

use serde::Serialize;

use crate::error::DenoiseError;
use crate::imaging::Image;
use crate::nnet::DEFAULT_CHANNELS;
use crate::tiling::{
    fill_avg_neighbor, fill_best_neighbor, fill_random_neighbor, pixel_domino_pair, Parity,
};

/// Which training loop to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Masked self-prediction with domino-tiling validation.
    DominoDenoise,
    /// Even-filled and odd-filled images trained against each other.
    N2fDomino,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::DominoDenoise => "dd",
            Mode::N2fDomino => "n2f-domino",
        }
    }
}

/// How the two parity-filled validation images are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStrategy {
    /// Minimum-cost domino tiling partners.
    Domino,
    /// Mean of the in-bounds 4-neighbors.
    AvgNeighbor,
    /// A uniformly random in-bounds 4-neighbor.
    RandNeighbor,
    /// The 4-neighbor with the lowest directional variance cost.
    BestNeighbor,
}

impl PairStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            PairStrategy::Domino => "domino",
            PairStrategy::AvgNeighbor => "avg",
            PairStrategy::RandNeighbor => "rand",
            PairStrategy::BestNeighbor => "best",
        }
    }
}

/// Settings for one denoising run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenoiseConfig {
    pub mode: Mode,
    pub seed: u64,
    pub channels: usize,
    /// Iterations per validation epoch.
    pub epoch_len: usize,
    /// Smoothed epochs (or checks, in the alternate mode) without a new
    /// minimum before training stops.
    pub patience: usize,
    /// Hard iteration cap so every run terminates.
    pub max_iterations: u64,
    /// Iterations between validation checks in the alternate mode.
    pub n2f_check_interval: usize,
    pub pair_strategy: PairStrategy,
}

impl DenoiseConfig {
    pub fn new(mode: Mode, seed: u64) -> DenoiseConfig {
        DenoiseConfig {
            mode,
            seed,
            channels: DEFAULT_CHANNELS,
            epoch_len: 500,
            patience: 30,
            max_iterations: 100_000,
            n2f_check_interval: 250,
            pair_strategy: PairStrategy::Domino,
        }
    }

    pub fn validate(&self) -> Result<(), DenoiseError> {
        let positive: [(&str, bool); 5] = [
            ("channels", self.channels >= 1),
            ("epoch length", self.epoch_len >= 1),
            ("patience", self.patience >= 1),
            ("max iterations", self.max_iterations >= 1),
            ("check interval", self.n2f_check_interval >= 1),
        ];
        for (name, ok) in positive {
            if !ok {
                return Err(DenoiseError::InvalidArgument(format!(
                    "{name} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// What a run did, serialized alongside the output image.
///
/// In the alternate mode, `epochs` counts validation checks, `q` holds
/// the validation mean-squared errors, and `s` stays empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub mode: &'static str,
    pub iterations: u64,
    pub epochs: usize,
    pub halting_epoch: Option<usize>,
    pub best_epoch: usize,
    pub q: Vec<f64>,
    pub s: Vec<f64>,
    pub unresolved_pixels: u64,
    pub psnr_vs_input: f64,
}

/// Runs the loop selected by `cfg.mode`.
pub fn run(img: &Image, cfg: &DenoiseConfig) -> Result<(Image, RunReport), DenoiseError> {
    match cfg.mode {
        Mode::DominoDenoise => denoise(img, cfg),
        Mode::N2fDomino => n2f_domino_denoise(img, cfg),
    }
}

/// Builds the even-filled and odd-filled validation images.
pub fn make_pair(
    img: &Image,
    strategy: PairStrategy,
    seed: u64,
) -> Result<(Image, Image), DenoiseError> {
    match strategy {
        PairStrategy::Domino => pixel_domino_pair(img),
        PairStrategy::AvgNeighbor => Ok((
            fill_avg_neighbor(img, Parity::Even),
            fill_avg_neighbor(img, Parity::Odd),
        )),
        PairStrategy::RandNeighbor => Ok((
            fill_random_neighbor(img, Parity::Even, seed),
            fill_random_neighbor(img, Parity::Odd, seed),
        )),
        PairStrategy::BestNeighbor => Ok((
            fill_best_neighbor(img, Parity::Even),
            fill_best_neighbor(img, Parity::Odd),
        )),
    }
}
