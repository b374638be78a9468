//! A minimal neural-network engine for the denoiser: tensors, partial
//! convolutions with mask propagation, binary cross-entropy, manual
//! reverse-mode gradients, Adam, and weight checkpoints.

mod adam;
mod checkpoint;
mod conv;
mod loss;
mod network;
mod tensor;

pub use adam::{adam_step, AdamState};
pub(crate) use conv::apply_mask;
pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use conv::PartialConv;
pub use loss::bce_loss;
pub use network::{
    init_network, init_network_with_depth, ForwardPass, Gradients, Network, DEFAULT_CHANNELS,
    DEPTH,
};
pub use tensor::{MaskTensor, Tensor};
