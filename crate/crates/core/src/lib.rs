//! Blind zero-shot image denoising built around pixel domino tilings.
//!
//! The crate trains a small semi-blind-spot network on the single noisy
//! image it is asked to denoise and decides when to stop by watching how
//! well the network maps one domino tiling of the image onto the other.
//! The tiling machinery (cost function, sparse assignment solver, exact
//! tiling counters and the ablation fill strategies) is exposed on its
//! own so it can be reused outside the denoiser.

pub mod error;
pub mod imaging;
pub mod nnet;
pub mod rng;
pub mod tiling;
pub mod trainer;

pub use error::DenoiseError;
pub use imaging::Image;
