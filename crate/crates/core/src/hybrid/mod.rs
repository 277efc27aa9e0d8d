//! The composite hypothesis `h(x) = F(z(x))`: circuit, measurement vector
//! `z(x)`, then a bounded network `F`.

mod train;

use alloc::format;
use alloc::vec::Vec;

use crate::math::sqrt;
use crate::net::NetworkStack;
use crate::qcore::{ComplexMatrix, CircuitSpec};
use crate::{Error, Result};

pub use train::{train, TrainOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct HybridModel {
    circuit: CircuitSpec,
    net: NetworkStack,
    theta: Vec<f64>,
}

impl HybridModel {
    pub fn new(circuit: CircuitSpec, net: NetworkStack, theta: Vec<f64>) -> Result<Self> {
        if net.input_dim() != circuit.measurement_count() {
            return Err(Error::Shape(format!(
                "network input dimension {} differs from measurement count {}",
                net.input_dim(),
                circuit.measurement_count()
            )));
        }
        if theta.len() != circuit.parameter_count() {
            return Err(Error::Shape(format!(
                "circuit needs {} angles, got {}",
                circuit.parameter_count(),
                theta.len()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::param("theta", "non-finite angle"));
        }
        if !net.is_within_class() {
            return Err(Error::Contract("a layer lies outside its Frobenius ball".into()));
        }
        Ok(Self { circuit, net, theta })
    }

    pub fn circuit(&self) -> &CircuitSpec {
        &self.circuit
    }

    pub fn net(&self) -> &NetworkStack {
        &self.net
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Same circuit and angles with another network.
    pub fn with_net(&self, net: NetworkStack) -> Result<Self> {
        Self::new(self.circuit.clone(), net, self.theta.clone())
    }

    /// Same circuit and network with other angles.
    pub fn with_theta(&self, theta: Vec<f64>) -> Result<Self> {
        Self::new(self.circuit.clone(), self.net.clone(), theta)
    }

    pub fn slot_unitaries(&self) -> Result<Vec<ComplexMatrix>> {
        self.circuit.slot_unitaries(&self.theta)
    }

    /// Measurement vector `z(x)`.
    pub fn features(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.circuit.features(&self.slot_unitaries()?, x)
    }

    /// Predictions for many inputs, building the gate unitaries once.
    pub fn predict_many(&self, inputs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let slot_u = self.slot_unitaries()?;
        inputs
            .iter()
            .map(|x| self.net.forward(&self.circuit.features(&slot_u, x)?))
            .collect()
    }

    pub fn output_dim(&self) -> usize {
        self.net.output_dim()
    }
}

/// `forward(net, measure_vector(run_circuit(encode(x))))`.
pub fn predict(model: &HybridModel, x: &[f64]) -> Result<Vec<f64>> {
    model.net.forward(&model.features(x)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossKind {
    /// `min(clip, mean squared error)`.
    #[default]
    ClippedSquare,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSpec {
    pub kind: LossKind,
    /// Upper bound of the loss (`M`).
    pub clip: f64,
    /// Coordinate-wise Lipschitz constant in the prediction.
    pub lipschitz: f64,
}

impl LossSpec {
    /// Clipped squared error on `out_dim` outputs. On the unclipped region
    /// every residual satisfies `|p_i − y_i| ≤ √(d·clip)`, so each partial
    /// derivative `2|p_i − y_i|/d` is at most `2√(clip/d)`.
    pub fn clipped_square(clip: f64, out_dim: usize) -> Result<Self> {
        if !(clip > 0.0 && clip.is_finite()) {
            return Err(Error::param("clip", "must be positive and finite"));
        }
        if out_dim == 0 {
            return Err(Error::param("out_dim", "must be positive"));
        }
        Ok(Self {
            kind: LossKind::ClippedSquare,
            clip,
            lipschitz: 2.0 * sqrt(clip / out_dim as f64),
        })
    }

    pub fn with_lipschitz(mut self, lipschitz: f64) -> Result<Self> {
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::param("lipschitz", "must be positive and finite"));
        }
        self.lipschitz = lipschitz;
        Ok(self)
    }
}

/// Loss of one prediction.
pub fn loss(spec: &LossSpec, pred: &[f64], label: &[f64]) -> Result<f64> {
    if pred.len() != label.len() || pred.is_empty() {
        return Err(Error::Shape(format!(
            "prediction has {} values, label {}",
            pred.len(),
            label.len()
        )));
    }
    let mse = pred.iter().zip(label).map(|(p, y)| (p - y) * (p - y)).sum::<f64>() / pred.len() as f64;
    Ok(match spec.kind {
        LossKind::ClippedSquare => mse.min(spec.clip),
    })
}

/// Gradient of [`loss`] with respect to the prediction.
pub(crate) fn loss_gradient(spec: &LossSpec, pred: &[f64], label: &[f64]) -> Vec<f64> {
    let d = pred.len() as f64;
    let mse = pred.iter().zip(label).map(|(p, y)| (p - y) * (p - y)).sum::<f64>() / d;
    if mse >= spec.clip {
        return alloc::vec![0.0; pred.len()];
    }
    pred.iter().zip(label).map(|(p, y)| 2.0 * (p - y) / d).collect()
}

/// Inputs with their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    inputs: Vec<Vec<f64>>,
    labels: Vec<Vec<f64>>,
}

impl SampleSet {
    pub fn new(inputs: Vec<Vec<f64>>, labels: Vec<Vec<f64>>) -> Result<Self> {
        if inputs.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} inputs but {} labels",
                inputs.len(),
                labels.len()
            )));
        }
        if inputs.is_empty() {
            return Err(Error::param("samples", "sample set is empty"));
        }
        Ok(Self { inputs, labels })
    }

    /// Inputs only; labels are left empty.
    pub fn unlabeled(inputs: Vec<Vec<f64>>) -> Result<Self> {
        let labels = alloc::vec![Vec::new(); inputs.len()];
        Self::new(inputs, labels)
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn labels(&self) -> &[Vec<f64>] {
        &self.labels
    }

    /// Largest input norm.
    pub fn radius(&self) -> f64 {
        self.inputs
            .iter()
            .map(|x| sqrt(x.iter().map(|v| v * v).sum()))
            .fold(0.0, f64::max)
    }
}

/// Mean loss over the sample.
pub fn empirical_risk(model: &HybridModel, spec: &LossSpec, data: &SampleSet) -> Result<f64> {
    let preds = model.predict_many(data.inputs())?;
    risk_of_predictions(spec, &preds, data.labels())
}

pub(crate) fn risk_of_predictions(spec: &LossSpec, preds: &[Vec<f64>], labels: &[Vec<f64>]) -> Result<f64> {
    if preds.is_empty() {
        return Err(Error::param("samples", "sample set is empty"));
    }
    let mut total = 0.0;
    for (p, y) in preds.iter().zip(labels) {
        total += loss(spec, p, y)?;
    }
    Ok(total / preds.len() as f64)
}
