use alloc::format;

use serde::{Deserialize, Serialize};

use super::dudley::dudley_j;
use super::BoundParams;
use crate::math::{log, pow, sqrt};
use crate::{Error, Result};

/// Constants of the chaining argument for the classical summand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intermediates {
    /// `C = 6 k R L^{k-1} α^k β√n`.
    pub c: f64,
    /// `γ₀ = β√n`.
    pub gamma0: f64,
    /// `J = ∫₀^{γ₀} √log(C/ε) dε`.
    pub j: f64,
}

/// Dudley bound on the empirical Rademacher complexity of the hybrid class,
/// split into its network and circuit summands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RademacherBreakdown {
    /// `12 √(kmn) J / √N`.
    pub classical_term: f64,
    /// `3√512 γ₀ √T √log(24 T M L^{k-1} α^k β√n / γ₀) / √N`.
    pub quantum_term: f64,
    pub intermediate: Intermediates,
    /// The logarithm in the circuit summand had an argument `≤ 1` and the
    /// summand was set to zero.
    pub quantum_log_clamped: bool,
}

impl RademacherBreakdown {
    pub fn total(&self) -> f64 {
        self.classical_term + self.quantum_term
    }
}

/// Generalization bound `2 (L_ℓ/√n) R̂ + c √(log(1/δ)/N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundBreakdown {
    pub classical_term: f64,
    pub quantum_term: f64,
    /// `L_ℓ/√n`, the contraction factor applied to both summands.
    pub contraction: f64,
    pub confidence_term: f64,
    pub total: f64,
    pub intermediate: Intermediates,
    pub quantum_log_clamped: bool,
}

fn sample_factor(params: &BoundParams) -> f64 {
    1.0 / sqrt(params.samples as f64)
}

fn confidence_term(params: &BoundParams) -> f64 {
    params.c_conf * sqrt(log(1.0 / params.delta).max(0.0) / params.samples as f64)
}

pub fn rademacher_bound_hybrid(params: &BoundParams) -> Result<RademacherBreakdown> {
    params.validate()?;
    let (k, m, n) = (params.layers as f64, params.rows as f64, params.cols as f64);
    let gamma0 = params.hybrid_radius();
    let lip = params.network_lipschitz();
    let c = 6.0 * k * params.radius * lip * gamma0;
    let j = dudley_j(c, gamma0)?;
    let classical_term = 12.0 * sqrt(k * m * n) * j * sample_factor(params);

    let applications = (params.gates * params.max_repetitions) as f64;
    // the β√n in the numerator cancels against γ₀
    let log_arg = 24.0 * applications * lip;
    let clamped = log_arg <= 1.0;
    let quantum_term = if clamped {
        0.0
    } else {
        3.0 * sqrt(512.0) * gamma0 * sqrt(params.gates as f64) * sqrt(log(log_arg)) * sample_factor(params)
    };
    Ok(RademacherBreakdown {
        classical_term,
        quantum_term,
        intermediate: Intermediates { c, gamma0, j },
        quantum_log_clamped: clamped,
    })
}

pub fn generalization_bound_hybrid(params: &BoundParams) -> Result<BoundBreakdown> {
    let rad = rademacher_bound_hybrid(params)?;
    let contraction = params.loss_lipschitz / sqrt(params.measurements as f64);
    let confidence = confidence_term(params);
    let total = 2.0 * contraction * (rad.classical_term + rad.quantum_term) + confidence;
    if !total.is_finite() {
        return Err(Error::param("params", "bound is not finite"));
    }
    Ok(BoundBreakdown {
        classical_term: rad.classical_term,
        quantum_term: rad.quantum_term,
        contraction,
        confidence_term: confidence,
        total,
        intermediate: rad.intermediate,
        quantum_log_clamped: rad.quantum_log_clamped,
    })
}

/// Bound for a circuit-only model with `T` gates each used at most `M`
/// times, evaluated with unit constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QmlmBound {
    /// `√(T log(TM)/N)`.
    pub complexity_term: f64,
    /// `√(log(1/δ)/N)`.
    pub confidence_term: f64,
    pub total: f64,
}

pub fn generalization_bound_qmlm(gates: usize, max_repetitions: usize, samples: usize, delta: f64) -> Result<QmlmBound> {
    if gates == 0 {
        return Err(Error::param("gates", "must be at least 1"));
    }
    if max_repetitions == 0 {
        return Err(Error::param("max_repetitions", "must be at least 1"));
    }
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::param("delta", format!("must lie in (0, 1], got {delta}")));
    }
    let t = gates as f64;
    let n = samples as f64;
    let complexity_term = sqrt(t * log(t * max_repetitions as f64) / n);
    let confidence_term = sqrt(log(1.0 / delta) / n);
    Ok(QmlmBound {
        complexity_term,
        confidence_term,
        total: complexity_term + confidence_term,
    })
}

/// Sample size at which `√(T log T / N)` drops to `eps`: `T log T / eps²`.
pub fn required_samples(eps: f64, gates: usize) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::param("eps", "must be positive"));
    }
    if gates == 0 {
        return Err(Error::param("gates", "must be at least 1"));
    }
    let t = gates as f64;
    Ok(t * log(t) / (eps * eps))
}

/// Network-only bound `L_ℓ L^k α^k k^{3/2} √(mn/N) + c √(log(1/δ)/N)`.
pub fn generalization_bound_network(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    let k = params.layers as f64;
    let leading = params.loss_lipschitz
        * pow(params.lipschitz * params.alpha, k)
        * pow(k, 1.5)
        * sqrt((params.rows * params.cols) as f64 / params.samples as f64);
    Ok(leading + confidence_term(params))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qmlm_example() {
        let b = generalization_bound_qmlm(10, 1, 1000, 0.01).unwrap();
        assert!((b.complexity_term - 0.1517).abs() < 1e-4);
        assert!((b.confidence_term - 0.0679).abs() < 1e-4);
        assert!((b.total - 0.2196).abs() < 1e-4);
        assert!((required_samples(0.1, 10).unwrap() - 2302.6).abs() < 0.05);
        assert!(generalization_bound_qmlm(0, 1, 10, 0.1).is_err());
    }

    #[test]
    fn delta_one_removes_confidence() {
        let p = BoundParams {
            delta: 1.0,
            ..BoundParams::default()
        };
        assert_eq!(generalization_bound_hybrid(&p).unwrap().confidence_term, 0.0);
    }

    #[test]
    fn clamp_flag_for_tiny_alpha() {
        let p = BoundParams {
            alpha: 0.01,
            ..BoundParams::default()
        };
        let r = rademacher_bound_hybrid(&p).unwrap();
        assert!(r.quantum_log_clamped);
        assert_eq!(r.quantum_term, 0.0);
    }

    #[test]
    fn network_bound_alpha_scaling() {
        let p = BoundParams {
            layers: 2,
            delta: 1.0,
            ..BoundParams::default()
        };
        let doubled = BoundParams { alpha: 2.0, ..p };
        let a = generalization_bound_network(&p).unwrap();
        let b = generalization_bound_network(&doubled).unwrap();
        assert!((b / a - 4.0).abs() < 1e-12);
    }
}
