//! Masked binary cross-entropy.

use super::tensor::{MaskTensor, Tensor};
use crate::error::DenoiseError;

/// Clamp bounds keeping the logarithms finite.
const P_MIN: f64 = 1.0e-7;
const P_MAX: f64 = 1.0 - 1.0e-7;

/// Mean binary cross-entropy over the pixels selected by `loss_mask`:
/// `-(t ln p + (1 - t) ln(1 - p))`, with predictions clamped to
/// `[1e-7, 1 - 1e-7]`. Targets may be any intensities in `[0, 1]`.
pub fn bce_loss(
    pred: &Tensor,
    target: &Tensor,
    loss_mask: &MaskTensor,
) -> Result<f64, DenoiseError> {
    if !pred.same_shape(target) {
        return Err(DenoiseError::ShapeMismatch(
            "prediction and target shapes differ".into(),
        ));
    }
    if pred.channels() != 1
        || pred.height() != loss_mask.height()
        || pred.width() != loss_mask.width()
    {
        return Err(DenoiseError::ShapeMismatch(
            "loss mask shape does not match predictions".into(),
        ));
    }
    let mut total = 0.0;
    let mut selected = 0usize;
    for ((&p, &t), &live) in pred
        .plane(0)
        .iter()
        .zip(target.plane(0))
        .zip(loss_mask.data())
    {
        if live == 0.0 {
            continue;
        }
        selected += 1;
        let p = p.clamp(P_MIN, P_MAX);
        total -= t * p.ln() + (1.0 - t) * (1.0 - p).ln();
    }
    if selected == 0 {
        return Err(DenoiseError::EmptyLossMask);
    }
    Ok(total / selected as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(value: f64) -> Tensor {
        Tensor::from_data(1, 1, 1, vec![value]).unwrap()
    }

    #[test]
    fn coin_flip_prediction_costs_ln_two() {
        let loss = bce_loss(&single(0.5), &single(0.5), &MaskTensor::ones(1, 1)).unwrap();
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn confident_correct_predictions_cost_almost_nothing() {
        let nearly_zero = bce_loss(&single(1e-7), &single(0.0), &MaskTensor::ones(1, 1)).unwrap();
        let nearly_one =
            bce_loss(&single(1.0 - 1e-7), &single(1.0), &MaskTensor::ones(1, 1)).unwrap();
        assert!(nearly_zero < 1e-6);
        assert!(nearly_one < 1e-6);
    }

    #[test]
    fn unselected_pixels_do_not_contribute() {
        let pred = Tensor::from_data(1, 2, 2, vec![0.5, 0.9, 0.1, 0.7]).unwrap();
        let target = Tensor::from_data(1, 2, 2, vec![0.5, 0.1, 0.9, 0.2]).unwrap();
        let mut mask = MaskTensor::zeros(2, 2);
        mask.set(0, 0, true);
        let narrow = bce_loss(&pred, &target, &mask).unwrap();
        assert!((narrow - std::f64::consts::LN_2).abs() < 1e-12);

        // Rewriting the unselected pixels must not move the loss.
        let pred_b = Tensor::from_data(1, 2, 2, vec![0.5, 0.2, 0.6, 0.3]).unwrap();
        let target_b = Tensor::from_data(1, 2, 2, vec![0.5, 0.8, 0.4, 0.9]).unwrap();
        assert_eq!(narrow, bce_loss(&pred_b, &target_b, &mask).unwrap());
    }

    #[test]
    fn empty_mask_is_an_error() {
        assert!(matches!(
            bce_loss(&single(0.5), &single(0.5), &MaskTensor::zeros(1, 1)),
            Err(DenoiseError::EmptyLossMask)
        ));
    }

    #[test]
    fn extreme_predictions_are_clamped_to_finite_loss() {
        let loss = bce_loss(&single(1.0), &single(0.0), &MaskTensor::ones(1, 1)).unwrap();
        assert!(loss.is_finite());
        assert!(loss > 10.0);
    }

    #[test]
    fn shape_mismatches_are_rejected() {
        let pred = Tensor::zeros(1, 2, 2);
        let target = Tensor::zeros(1, 2, 3);
        assert!(bce_loss(&pred, &target, &MaskTensor::ones(2, 2)).is_err());
        let target = Tensor::zeros(1, 2, 2);
        assert!(bce_loss(&pred, &target, &MaskTensor::ones(3, 2)).is_err());
    }
}
