//! Adam with bias correction.

use super::network::{Gradients, Network};
use crate::error::DenoiseError;

/// Optimizer state: one first/second moment accumulator per parameter,
/// laid out in the network's canonical block order.
#[derive(Debug, Clone)]
pub struct AdamState {
    step: u64,
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
}

impl AdamState {
    /// Fresh state with the default hyperparameters
    /// (`lr = 1e-4`, `beta1 = 0.9`, `beta2 = 0.999`, `eps = 1e-8`).
    pub fn new(net: &Network) -> AdamState {
        AdamState::with_lr(net, 1e-4)
    }

    pub fn with_lr(net: &Network, lr: f64) -> AdamState {
        let zeros: Vec<Vec<f64>> = (0..net.num_blocks())
            .map(|block| vec![0.0; net.block_len(block)])
            .collect();
        AdamState {
            step: 0,
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            first: zeros.clone(),
            second: zeros,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn lr(&self) -> f64 {
        self.lr
    }
}

/// One Adam update of every network parameter in place.
pub fn adam_step(
    net: &mut Network,
    grads: &Gradients,
    state: &mut AdamState,
) -> Result<(), DenoiseError> {
    if grads.blocks.len() != net.num_blocks()
        || state.first.len() != net.num_blocks()
        || grads
            .blocks
            .iter()
            .enumerate()
            .any(|(block, g)| g.len() != net.block_len(block))
    {
        return Err(DenoiseError::ShapeMismatch(
            "gradient blocks do not match the network parameters".into(),
        ));
    }
    state.step += 1;
    let t = state.step as i32;
    let first_correction = 1.0 - state.beta1.powi(t);
    let second_correction = 1.0 - state.beta2.powi(t);
    for block in 0..net.num_blocks() {
        let params = net.block_mut(block);
        let grads = &grads.blocks[block];
        let first = &mut state.first[block];
        let second = &mut state.second[block];
        for index in 0..params.len() {
            let g = grads[index];
            first[index] = state.beta1 * first[index] + (1.0 - state.beta1) * g;
            second[index] = state.beta2 * second[index] + (1.0 - state.beta2) * g * g;
            let corrected_first = first[index] / first_correction;
            let corrected_second = second[index] / second_correction;
            params[index] -= state.lr * corrected_first / (corrected_second.sqrt() + state.eps);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::network::init_network;
    use super::*;

    fn constant_gradients(net: &Network, value: f64) -> Gradients {
        Gradients {
            blocks: (0..net.num_blocks())
                .map(|block| vec![value; net.block_len(block)])
                .collect(),
        }
    }

    #[test]
    fn zero_gradients_leave_parameters_unchanged() {
        let mut net = init_network(3, 2);
        let before = net.clone();
        let mut state = AdamState::new(&net);
        let grads = constant_gradients(&net, 0.0);
        adam_step(&mut net, &grads, &mut state).unwrap();
        assert_eq!(net, before);
        assert_eq!(state.step_count(), 1);
    }

    #[test]
    fn constant_gradient_steps_approach_the_learning_rate() {
        let mut net = init_network(4, 2);
        let mut state = AdamState::with_lr(&net, 1e-3);
        let grads = constant_gradients(&net, 0.37);
        let mut previous = net.param(0, 0);
        // Burn in the moment estimates, then check the unit-step limit.
        for _ in 0..200 {
            adam_step(&mut net, &grads, &mut state).unwrap();
            previous = net.param(0, 0);
        }
        adam_step(&mut net, &grads, &mut state).unwrap();
        let displacement = (net.param(0, 0) - previous).abs();
        assert!(
            (displacement - 1e-3).abs() < 1e-5,
            "constant-gradient step {displacement} should approach lr"
        );
    }

    #[test]
    fn updates_are_deterministic() {
        let run = || {
            let mut net = init_network(5, 2);
            let mut state = AdamState::new(&net);
            let grads = constant_gradients(&net, 0.1);
            for _ in 0..10 {
                adam_step(&mut net, &grads, &mut state).unwrap();
            }
            net
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn mismatched_blocks_are_rejected() {
        let mut net = init_network(6, 2);
        let mut state = AdamState::new(&net);
        let bad = Gradients {
            blocks: vec![vec![0.0; 3]; 2],
        };
        assert!(adam_step(&mut net, &bad, &mut state).is_err());
    }
}
