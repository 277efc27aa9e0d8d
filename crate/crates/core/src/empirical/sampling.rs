//! Random draws of inputs, layers, networks and hybrid models.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::hybrid::HybridModel;
use crate::math::{pow, sqrt};
use crate::net::{Activation, BoundedLayer, NetworkStack};
use crate::qcore::CircuitSpec;
use crate::{Error, Result};

/// Uniform point of the closed `ℓ2` ball of radius `radius` in `ℝ^dim`.
pub fn uniform_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    let norm = sqrt(v.iter().map(|x| x * x).sum());
    let r = radius * pow(rng.random::<f64>(), 1.0 / dim as f64);
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x *= r / norm;
        }
    }
    v
}

/// Gaussian direction rescaled to Frobenius norm `fill · alpha`.
pub fn random_layer<R: Rng + ?Sized>(rng: &mut R, out_dim: usize, in_dim: usize, alpha: f64, fill: f64) -> Result<BoundedLayer> {
    if !(fill > 0.0 && fill <= 1.0) {
        return Err(Error::param("fill", "must lie in (0, 1]"));
    }
    let mut w = DMatrix::from_fn(out_dim, in_dim, |_, _| StandardNormal.sample(rng));
    let norm = w.norm();
    if norm > 0.0 {
        w *= fill * alpha / norm;
    }
    BoundedLayer::projected(w, alpha)
}

/// Network with layer shapes `dims[i+1] × dims[i]`.
pub fn random_network<R: Rng + ?Sized>(
    rng: &mut R,
    dims: &[usize],
    alpha: f64,
    activation: Activation,
    fill: f64,
) -> Result<NetworkStack> {
    if dims.len() < 2 {
        return Err(Error::param("dims", "need at least input and output dimension"));
    }
    let layers = dims
        .windows(2)
        .map(|w| random_layer(rng, w[1], w[0], alpha, fill))
        .collect::<Result<Vec<_>>>()?;
    NetworkStack::new(layers, activation)
}

/// Angles uniform in `[-π, π)`.
pub fn random_theta<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    (0..count).map(|_| PI * (2.0 * rng.random::<f64>() - 1.0)).collect()
}

pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    circuit: &CircuitSpec,
    dims: &[usize],
    alpha: f64,
    activation: Activation,
    fill: f64,
) -> Result<HybridModel> {
    let theta = random_theta(rng, circuit.parameter_count());
    let net = random_network(rng, dims, alpha, activation, fill)?;
    HybridModel::new(circuit.clone(), net, theta)
}
