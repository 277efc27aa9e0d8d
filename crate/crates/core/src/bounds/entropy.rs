use alloc::format;

use serde::{Deserialize, Serialize};

use super::BoundParams;
use crate::math::{log, pow};
use crate::{Error, Result};

/// Real dimension of `U(4)` bounding the unitary covering exponent.
pub const UNITARY_ENTROPY_EXPONENT: f64 = 32.0;

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || eps.is_nan() {
        return Err(Error::param("eps", format!("must be positive, got {eps}")));
    }
    Ok(())
}

fn check_radius(name: &'static str, r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param(name, format!("must be positive and finite, got {r}")));
    }
    Ok(())
}

/// `max(0, n log(3α/ε))` for the ℓ2 ball of radius `α` in `ℝⁿ`.
pub fn entropy_l2_ball(n: usize, alpha: f64, eps: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "dimension must be positive"));
    }
    check_radius("alpha", alpha)?;
    check_eps(eps)?;
    Ok((n as f64 * log(3.0 * alpha / eps)).max(0.0))
}

/// Frobenius ball of `m × n` matrices: the ℓ2 ball in `ℝ^{mn}`.
pub fn entropy_fc_layer(m: usize, n: usize, alpha: f64, eps: f64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::param("m, n", "dimensions must be positive"));
    }
    entropy_l2_ball(m * n, alpha, eps)
}

/// Entropy of the k-layer class under the sample `ℓ2` metric:
/// `kmn log(3 k R L^{k-1} α^k / ε)` up to `ε = k R L^{k-1} α^k`, zero beyond.
pub fn network_entropy(
    k: usize,
    m: usize,
    n: usize,
    radius: f64,
    lipschitz: f64,
    alpha: f64,
    eps: f64,
) -> Result<f64> {
    if k == 0 || m == 0 || n == 0 {
        return Err(Error::param("k, m, n", "must be positive"));
    }
    check_radius("radius", radius)?;
    check_radius("lipschitz", lipschitz)?;
    check_radius("alpha", alpha)?;
    check_eps(eps)?;
    let scale = k as f64 * radius * pow(lipschitz, (k - 1) as f64) * pow(alpha, k as f64);
    if eps > scale {
        return Ok(0.0);
    }
    Ok((k * m * n) as f64 * log(3.0 * scale / eps))
}

/// [`network_entropy`] with the dimensions and radius of `params`.
pub fn entropy_network(params: &BoundParams, eps: f64) -> Result<f64> {
    network_entropy(
        params.layers,
        params.rows,
        params.cols,
        params.radius,
        params.lipschitz,
        params.alpha,
        eps,
    )
}

/// `32 log(6‖I‖/ε)` for 2-qubit unitaries under a unitarily invariant norm
/// with `‖I‖ = id_norm`; only valid for `0 < ε ≤ ‖I‖`.
pub fn entropy_two_qubit_unitary(eps: f64, id_norm: f64) -> Result<f64> {
    check_radius("id_norm", id_norm)?;
    check_eps(eps)?;
    if eps > id_norm {
        return Err(Error::Domain(format!(
            "unitary covering bound needs eps <= {id_norm}, got {eps}"
        )));
    }
    Ok(UNITARY_ENTROPY_EXPONENT * log(6.0 * id_norm / eps))
}

/// [`entropy_two_qubit_unitary`] extended to every `ε > 0`: the value at
/// `‖I‖` for `‖I‖ < ε < 2‖I‖` (covering numbers do not increase with `ε`)
/// and zero from `2‖I‖`, the diameter of the unitary group.
pub fn unitary_entropy_capped(eps: f64, id_norm: f64) -> Result<f64> {
    check_radius("id_norm", id_norm)?;
    check_eps(eps)?;
    if eps >= 2.0 * id_norm {
        Ok(0.0)
    } else {
        entropy_two_qubit_unitary(eps.min(id_norm), id_norm)
    }
}

/// The two summands of the hybrid entropy and the resolutions they are
/// evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridEntropy {
    pub eps: f64,
    /// Resolution handed to each gate cover.
    pub unitary_eps: f64,
    /// Resolution handed to the network cover.
    pub network_eps: f64,
    /// `T` times the unitary entropy at `unitary_eps`.
    pub quantum: f64,
    pub classical: f64,
    pub total: f64,
}

/// Log of the product cover of the hybrid class: `T` unitary covers at
/// `ε / (4 T M L^{k-1} α^k β√n)` and one network cover at `ε / (2β√n)` with
/// input radius `β√n`.
pub fn entropy_hybrid_parts(params: &BoundParams, eps: f64) -> Result<HybridEntropy> {
    params.validate()?;
    check_eps(eps)?;
    let radius = params.hybrid_radius();
    let applications = (params.gates * params.max_repetitions) as f64;
    let unitary_eps = eps / (4.0 * applications * params.network_lipschitz() * radius);
    let network_eps = eps / (2.0 * radius);
    let quantum = params.gates as f64 * unitary_entropy_capped(unitary_eps, 1.0)?;
    let classical = network_entropy(
        params.layers,
        params.rows,
        params.cols,
        radius,
        params.lipschitz,
        params.alpha,
        network_eps,
    )?;
    Ok(HybridEntropy {
        eps,
        unitary_eps,
        network_eps,
        quantum,
        classical,
        total: quantum + classical,
    })
}

pub fn entropy_hybrid(params: &BoundParams, eps: f64) -> Result<f64> {
    Ok(entropy_hybrid_parts(params, eps)?.total)
}
