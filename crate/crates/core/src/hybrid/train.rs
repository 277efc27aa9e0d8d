use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::{loss_gradient, risk_of_predictions, HybridModel, LossSpec, SampleSet};
use crate::qcore::{build_unitary, ComplexMatrix, GENERATOR_COUNT};
use crate::{Error, Result};

/// Full-batch gradient descent settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOptions {
    pub steps: usize,
    pub learning_rate: f64,
    /// Central finite-difference step for the circuit angles.
    pub fd_step: f64,
}

impl TrainOptions {
    pub fn new(steps: usize, learning_rate: f64) -> Self {
        Self {
            steps,
            learning_rate,
            fd_step: 1e-4,
        }
    }
}

fn risk_with(
    model: &HybridModel,
    slot_u: &[ComplexMatrix],
    spec: &LossSpec,
    data: &SampleSet,
) -> Result<f64> {
    let preds = data
        .inputs()
        .iter()
        .map(|x| model.net.forward(&model.circuit.features(slot_u, x)?))
        .collect::<Result<Vec<_>>>()?;
    risk_of_predictions(spec, &preds, data.labels())
}

/// Gradient descent on the empirical risk: central finite differences for
/// the circuit angles, backpropagation for the weights, and a Frobenius
/// projection of every layer after each step. Deterministic.
pub fn train(model: &HybridModel, spec: &LossSpec, data: &SampleSet, opts: &TrainOptions) -> Result<HybridModel> {
    if !(opts.learning_rate > 0.0 && opts.learning_rate.is_finite()) {
        return Err(Error::param("learning_rate", "must be positive"));
    }
    if !(opts.fd_step > 0.0) {
        return Err(Error::param("fd_step", "must be positive"));
    }
    if data.labels().iter().any(|y| y.len() != model.output_dim()) {
        return Err(Error::Shape(format!(
            "labels must have {} values",
            model.output_dim()
        )));
    }
    let mut current = model.clone();
    let n = data.len() as f64;
    let h = opts.fd_step;
    for step in 0..opts.steps {
        let slot_u = current.slot_unitaries()?;

        let mut weight_grads: Vec<DMatrix<f64>> = current
            .net
            .layers()
            .iter()
            .map(|l| DMatrix::zeros(l.out_dim(), l.in_dim()))
            .collect();
        let mut risk = 0.0;
        for (x, y) in data.inputs().iter().zip(data.labels()) {
            let z = current.circuit.features(&slot_u, x)?;
            let trace = current.net.forward_trace(&z)?;
            let pred: Vec<f64> = trace.output().iter().copied().collect();
            risk += super::loss(spec, &pred, y)?;
            let g = DVector::from_vec(loss_gradient(spec, &pred, y));
            for (acc, grad) in weight_grads.iter_mut().zip(current.net.backward(&trace, &g)) {
                *acc += grad;
            }
        }
        risk /= n;
        if !risk.is_finite() {
            return Err(Error::Divergence {
                step,
                reason: format!("training risk is {risk}"),
            });
        }

        let mut theta_grad = alloc::vec![0.0; current.theta.len()];
        let mut probe = slot_u.clone();
        for (p, grad) in theta_grad.iter_mut().enumerate() {
            let slot = p / GENERATOR_COUNT;
            let block = slot * GENERATOR_COUNT..(slot + 1) * GENERATOR_COUNT;
            let mut angles = current.theta[block].to_vec();
            let j = p % GENERATOR_COUNT;
            let base = angles[j];
            angles[j] = base + h;
            probe[slot] = build_unitary(&angles)?;
            let plus = risk_with(&current, &probe, spec, data)?;
            angles[j] = base - h;
            probe[slot] = build_unitary(&angles)?;
            let minus = risk_with(&current, &probe, spec, data)?;
            probe[slot] = slot_u[slot].clone();
            *grad = (plus - minus) / (2.0 * h);
            if !grad.is_finite() {
                return Err(Error::Divergence {
                    step,
                    reason: format!("non-finite angle gradient at parameter {p}"),
                });
            }
        }

        for (t, g) in current.theta.iter_mut().zip(&theta_grad) {
            *t -= opts.learning_rate * g;
        }
        for (layer, grad) in current.net.layers_mut().iter_mut().zip(&weight_grads) {
            *layer.weights_mut() -= grad * (opts.learning_rate / n);
        }
        current.net.project();
    }
    Ok(current)
}
