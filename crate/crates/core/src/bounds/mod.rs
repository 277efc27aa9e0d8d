//! Closed-form metric entropies, Dudley integrals and generalization bounds.
//!
//! Every `𝒪`-expression is evaluated with leading constant 1; explicit
//! constants that enter the chaining argument are kept in
//! [`Intermediates`] so a bound can be rescaled after the fact.

mod dudley;
mod entropy;
mod generalization;

use alloc::format;

use serde::{Deserialize, Serialize};

use crate::hybrid::{HybridModel, LossSpec};
use crate::math::sqrt;
use crate::{Error, Result};

pub use dudley::{dudley_j, upper_gamma_three_halves};
pub use entropy::{
    entropy_fc_layer, entropy_hybrid, entropy_hybrid_parts, entropy_l2_ball, entropy_network,
    entropy_two_qubit_unitary, network_entropy, unitary_entropy_capped, HybridEntropy,
    UNITARY_ENTROPY_EXPONENT,
};
pub use generalization::{
    generalization_bound_hybrid, generalization_bound_network, generalization_bound_qmlm,
    rademacher_bound_hybrid, required_samples, BoundBreakdown, Intermediates, QmlmBound,
    RademacherBreakdown,
};

/// Every symbol the hybrid bound depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Independent 2-qubit gate slots (`T`).
    pub gates: usize,
    /// Largest number of applications of one slot (`M`).
    pub max_repetitions: usize,
    /// Network depth (`k`).
    pub layers: usize,
    /// Largest layer output dimension (`m`).
    pub rows: usize,
    /// Largest layer input dimension (`n` in `kmn`).
    pub cols: usize,
    /// Number of measured observables (`n` in `β√n` and in the contraction factor).
    pub measurements: usize,
    /// Frobenius bound of every layer (`α`).
    pub alpha: f64,
    /// Operator-norm bound of the observables (`β`).
    pub beta: f64,
    /// Activation Lipschitz constant (`L`).
    pub lipschitz: f64,
    /// Radius of the network input (`R`).
    pub radius: f64,
    /// Training sample size (`N`).
    pub samples: usize,
    /// Confidence parameter (`δ`).
    pub delta: f64,
    /// Coordinate-wise Lipschitz constant of the loss.
    pub loss_lipschitz: f64,
    /// Upper bound of the loss.
    pub loss_bound: f64,
    /// Constant in front of the confidence term.
    pub c_conf: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            gates: 1,
            max_repetitions: 1,
            layers: 1,
            rows: 1,
            cols: 1,
            measurements: 1,
            alpha: 1.0,
            beta: 1.0,
            lipschitz: 1.0,
            radius: 1.0,
            samples: 1,
            delta: 0.05,
            loss_lipschitz: 1.0,
            loss_bound: 1.0,
            c_conf: 3.0,
        }
    }
}

impl BoundParams {
    /// Parameters of the class containing `model`, with the network input
    /// radius set to `β√n` and `c_conf` defaulting to `3·M`.
    pub fn for_model(
        model: &HybridModel,
        loss: &LossSpec,
        samples: usize,
        delta: f64,
        c_conf: Option<f64>,
    ) -> Result<Self> {
        let circuit = model.circuit();
        let net = model.net();
        let beta = circuit.beta();
        let measurements = circuit.measurement_count();
        let params = Self {
            gates: circuit.slots(),
            max_repetitions: circuit.max_repetitions(),
            layers: net.depth(),
            rows: net.max_rows(),
            cols: net.max_cols(),
            measurements,
            alpha: net.alpha(),
            beta,
            lipschitz: net.activation().lipschitz(),
            radius: beta * sqrt(measurements as f64),
            samples,
            delta,
            loss_lipschitz: loss.lipschitz,
            loss_bound: loss.clip,
            c_conf: c_conf.unwrap_or(3.0 * loss.clip),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("gates", self.gates),
            ("max_repetitions", self.max_repetitions),
            ("layers", self.layers),
            ("rows", self.rows),
            ("cols", self.cols),
            ("measurements", self.measurements),
            ("samples", self.samples),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::param(name, "must be at least 1"));
            }
        }
        let reals = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("lipschitz", self.lipschitz),
            ("radius", self.radius),
            ("loss_lipschitz", self.loss_lipschitz),
            ("loss_bound", self.loss_bound),
            ("c_conf", self.c_conf),
        ];
        for (name, v) in reals {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::param("delta", format!("must lie in (0, 1], got {}", self.delta)));
        }
        Ok(())
    }

    /// `γ₀ = β√n`, the radius of the hybrid class.
    pub fn hybrid_radius(&self) -> f64 {
        self.beta * sqrt(self.measurements as f64)
    }

    /// `L^{k-1} α^k`.
    pub fn network_lipschitz(&self) -> f64 {
        crate::math::pow(self.lipschitz, (self.layers - 1) as f64) * crate::math::pow(self.alpha, self.layers as f64)
    }
}
