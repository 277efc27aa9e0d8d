//! The class of k-layer networks `F_k σ(F_{k-1} σ(⋯ σ(F_1 x)))` with every
//! layer in a Frobenius ball `‖F_i‖_F ≤ α`.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::math::{pow, tanh};
use crate::{Error, Result};

/// Coordinate-wise activation. All variants are 1-Lipschitz and fix 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Activation {
    Relu,
    #[default]
    Tanh,
    Identity,
}

impl Activation {
    pub fn apply(self, a: f64) -> f64 {
        match self {
            Activation::Relu => a.max(0.0),
            Activation::Tanh => tanh(a),
            Activation::Identity => a,
        }
    }

    pub fn derivative(self, a: f64) -> f64 {
        match self {
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => {
                let t = tanh(a);
                1.0 - t * t
            }
            Activation::Identity => 1.0,
        }
    }

    pub fn lipschitz(self) -> f64 {
        1.0
    }
}

/// A weight matrix (`out × in`) together with its Frobenius bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedLayer {
    weights: DMatrix<f64>,
    alpha: f64,
}

impl BoundedLayer {
    /// Checks finiteness and `alpha > 0`; the weights are kept as given.
    pub fn new(weights: DMatrix<f64>, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param("alpha", format!("must be positive, got {alpha}")));
        }
        if weights.nrows() == 0 || weights.ncols() == 0 {
            return Err(Error::Shape("layer with an empty weight matrix".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::param("weights", "non-finite weight"));
        }
        Ok(Self { weights, alpha })
    }

    /// Like [`BoundedLayer::new`], then projected into the ball.
    pub fn projected(weights: DMatrix<f64>, alpha: f64) -> Result<Self> {
        Ok(project_frobenius(&Self::new(weights, alpha)?))
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn in_dim(&self) -> usize {
        self.weights.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.nrows()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.weights.norm()
    }

    pub fn is_within_ball(&self) -> bool {
        self.frobenius_norm() <= self.alpha * (1.0 + BALL_TOL)
    }

    pub(crate) fn weights_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.weights
    }
}

/// Relative slack on `‖W‖_F ≤ α`; rescaling onto the sphere can land an ulp
/// outside.
pub const BALL_TOL: f64 = 1e-12;

/// Radial projection onto `‖W‖_F ≤ α`. Layers already inside (up to
/// [`BALL_TOL`]) are returned unchanged, so projecting twice is a no-op.
pub fn project_frobenius(layer: &BoundedLayer) -> BoundedLayer {
    let norm = layer.frobenius_norm();
    if layer.is_within_ball() {
        return layer.clone();
    }
    BoundedLayer {
        weights: &layer.weights * (layer.alpha / norm),
        alpha: layer.alpha,
    }
}

/// `L^{k-1} α^k`: Lipschitz constant of any network in the class with
/// respect to its input.
pub fn output_diff_factor(k: usize, lipschitz: f64, alpha: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("k", "network needs at least one layer"));
    }
    if !(lipschitz > 0.0) {
        return Err(Error::param("lipschitz", "must be positive"));
    }
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", "must be positive"));
    }
    Ok(pow(lipschitz, (k - 1) as f64) * pow(alpha, k as f64))
}

/// Per-layer values of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    /// `a_0 = x, a_1, …, a_{k-1}`: the input of every layer.
    pub layer_inputs: Vec<DVector<f64>>,
    /// `f_1, …, f_k`: pre-activations; the last one is the output.
    pub pre_activations: Vec<DVector<f64>>,
}

impl ForwardTrace {
    pub fn output(&self) -> &DVector<f64> {
        self.pre_activations.last().expect("network has at least one layer")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStack {
    layers: Vec<BoundedLayer>,
    activation: Activation,
}

impl NetworkStack {
    pub fn new(layers: Vec<BoundedLayer>, activation: Activation) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::param("layers", "network needs at least one layer"));
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].out_dim() != pair[1].in_dim() {
                return Err(Error::Shape(format!(
                    "layer {i} outputs {} values but layer {} expects {}",
                    pair[0].out_dim(),
                    i + 1,
                    pair[1].in_dim()
                )));
            }
        }
        Ok(Self { layers, activation })
    }

    pub fn layers(&self) -> &[BoundedLayer] {
        &self.layers
    }

    pub(crate) fn layers_mut(&mut self) -> &mut [BoundedLayer] {
        &mut self.layers
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    /// Number of layers `k`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim()
    }

    /// Largest Frobenius bound over the layers.
    pub fn alpha(&self) -> f64 {
        self.layers.iter().map(|l| l.alpha).fold(0.0, f64::max)
    }

    /// Largest output dimension (`m`).
    pub fn max_rows(&self) -> usize {
        self.layers.iter().map(BoundedLayer::out_dim).max().unwrap_or(0)
    }

    /// Largest input dimension (`n`).
    pub fn max_cols(&self) -> usize {
        self.layers.iter().map(BoundedLayer::in_dim).max().unwrap_or(0)
    }

    pub fn is_within_class(&self) -> bool {
        self.layers.iter().all(BoundedLayer::is_within_ball)
    }

    /// Projects every layer into its ball.
    pub fn project(&mut self) {
        for layer in &mut self.layers {
            *layer = project_frobenius(layer);
        }
    }

    pub fn forward_trace(&self, x: &[f64]) -> Result<ForwardTrace> {
        if x.len() != self.input_dim() {
            return Err(Error::Shape(format!(
                "network expects {} inputs, got {}",
                self.input_dim(),
                x.len()
            )));
        }
        let k = self.layers.len();
        let mut layer_inputs = Vec::with_capacity(k);
        let mut pre_activations = Vec::with_capacity(k);
        let mut a = DVector::from_column_slice(x);
        for (i, layer) in self.layers.iter().enumerate() {
            let f = &layer.weights * &a;
            layer_inputs.push(a);
            a = if i + 1 < k {
                f.map(|v| self.activation.apply(v))
            } else {
                DVector::zeros(0)
            };
            pre_activations.push(f);
        }
        Ok(ForwardTrace {
            layer_inputs,
            pre_activations,
        })
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_trace(x)?.output().iter().copied().collect())
    }

    /// Gradient of `⟨g, f(x)⟩` with respect to every weight matrix, where
    /// `g` is the gradient of a loss at the output.
    pub fn backward(&self, trace: &ForwardTrace, output_grad: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let k = self.layers.len();
        let mut grads = Vec::with_capacity(k);
        let mut delta = output_grad.clone();
        for i in (0..k).rev() {
            grads.push(&delta * trace.layer_inputs[i].transpose());
            if i > 0 {
                let back = self.layers[i].weights.transpose() * &delta;
                let pre = &trace.pre_activations[i - 1];
                delta = back.zip_map(pre, |b, p| b * self.activation.derivative(p));
            }
        }
        grads.reverse();
        grads
    }
}
