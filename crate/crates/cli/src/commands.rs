use std::io::Write;

use hybound_core::bounds::{
    entropy_hybrid_parts, entropy_network, generalization_bound_hybrid, generalization_bound_network,
    rademacher_bound_hybrid, unitary_entropy_capped, BoundBreakdown, BoundParams, HybridEntropy,
    RademacherBreakdown,
};
use hybound_core::empirical::suites::{
    entropy_suite, gamma_suite, gap_suite, radius_suite, rademacher_suite, reference_gap_experiment,
    telescope_suite, SuiteReport,
};
use hybound_core::empirical::{run_gap_cell, GapExperiment, GapRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::CliError;

/// Everything `bound` reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: BoundParams,
    pub breakdown: BoundBreakdown,
    pub rademacher: RademacherBreakdown,
    /// Hybrid entropy at `γ₀ = β√n`, the top of the chaining integral.
    pub entropy_at_gamma0: HybridEntropy,
    /// Bound of the network class alone, for comparison.
    pub network_only_bound: f64,
}

pub fn bound(cfg: &ExperimentConfig) -> Result<BoundReport, CliError> {
    let params = cfg.bound_params()?;
    Ok(BoundReport {
        params,
        breakdown: generalization_bound_hybrid(&params)?,
        rademacher: rademacher_bound_hybrid(&params)?,
        entropy_at_gamma0: entropy_hybrid_parts(&params, params.hybrid_radius())?,
        network_only_bound: generalization_bound_network(&params)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub eps: f64,
    /// Network entropy at the network share of `eps`.
    pub entropy_network: f64,
    /// `T` times the unitary entropy at the per-gate share of `eps`.
    pub entropy_unitary_scaled: f64,
    pub entropy_hybrid: f64,
}

/// Entropies on `steps` log-spaced resolutions from `eps_min` to `eps_max`.
pub fn entropy_curve(cfg: &ExperimentConfig, eps_min: f64, eps_max: f64, steps: usize) -> Result<Vec<CurvePoint>, CliError> {
    if !(eps_min > 0.0 && eps_min.is_finite() && eps_max >= eps_min && eps_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "need 0 < eps-min <= eps-max, got {eps_min} and {eps_max}"
        )));
    }
    if steps == 0 {
        return Err(CliError::Usage("steps must be at least 1".into()));
    }
    let params = cfg.bound_params()?;
    let ratio = (eps_max / eps_min).ln();
    (0..steps)
        .map(|i| {
            let eps = if steps == 1 {
                eps_min
            } else if i + 1 == steps {
                eps_max
            } else {
                eps_min * (ratio * i as f64 / (steps - 1) as f64).exp()
            };
            let parts = entropy_hybrid_parts(&params, eps)?;
            let network_params = BoundParams {
                radius: params.hybrid_radius(),
                ..params
            };
            Ok(CurvePoint {
                eps,
                entropy_network: entropy_network(&network_params, parts.network_eps)?,
                entropy_unitary_scaled: params.gates as f64 * unitary_entropy_capped(parts.unitary_eps, 1.0)?,
                entropy_hybrid: parts.total,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Gamma,
    Entropy,
    Radius,
    Telescope,
    Rademacher,
    Gap,
}

/// Seeds of the gap study run by `verify`.
pub const VERIFY_GAP_SEEDS: u64 = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

/// Runs the requested invariant suites. The gap suite trains the reference
/// study on seeds `seed..seed+10` and tolerates a `δ` fraction of records
/// above their bound.
pub fn verify(suite: Suite, seed: u64) -> Result<VerifyReport, CliError> {
    let wanted = |s: Suite| suite == Suite::All || suite == s;
    let mut suites = Vec::new();
    if wanted(Suite::Gamma) {
        suites.push(gamma_suite(seed)?);
    }
    if wanted(Suite::Entropy) {
        suites.push(entropy_suite(seed)?);
    }
    if wanted(Suite::Radius) {
        suites.push(radius_suite(seed)?);
    }
    if wanted(Suite::Telescope) {
        suites.push(telescope_suite(seed)?);
    }
    if wanted(Suite::Rademacher) {
        suites.push(rademacher_suite(seed)?);
    }
    if wanted(Suite::Gap) {
        let exp = reference_gap_experiment((seed..seed + VERIFY_GAP_SEEDS).collect())?;
        let records = run_cells(&exp)?;
        suites.push(gap_suite(seed, &records, exp.delta)?);
    }
    let passed = suites.iter().all(|s| s.passed);
    Ok(VerifyReport { seed, suites, passed })
}

/// Every cell of `exp` in `(N, seed)` order, cells spread over the rayon
/// pool. Each cell draws from its own streams, so the result does not depend
/// on the number of threads.
pub fn run_cells(exp: &GapExperiment) -> Result<Vec<GapRecord>, CliError> {
    exp.validate()?;
    let records = exp
        .cells()
        .into_par_iter()
        .map(|(n, seed)| run_gap_cell(exp, seed, n))
        .collect::<hybound_core::Result<Vec<_>>>()?;
    Ok(records)
}

pub fn experiment(cfg: &ExperimentConfig) -> Result<Vec<GapRecord>, CliError> {
    run_cells(&cfg.gap_experiment()?)
}

pub const EXPERIMENT_COLUMNS: [&str; 9] = [
    "seed",
    "N",
    "train_risk",
    "test_risk",
    "gap",
    "classical_term",
    "quantum_term",
    "confidence_term",
    "bound_total",
];

pub const CURVE_COLUMNS: [&str; 4] = ["eps", "entropy_network", "entropy_unitary_scaled", "entropy_hybrid"];

/// Seventeen significant digits, enough to read back the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_records<W: Write>(out: W, records: &[GapRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EXPERIMENT_COLUMNS)?;
    for r in records {
        w.write_record([
            r.seed.to_string(),
            r.n.to_string(),
            fmt_f64(r.train_risk),
            fmt_f64(r.test_risk),
            fmt_f64(r.gap),
            fmt_f64(r.bound.classical_term),
            fmt_f64(r.bound.quantum_term),
            fmt_f64(r.bound.confidence_term),
            fmt_f64(r.bound.total),
        ])?;
    }
    w.flush().map_err(|e| CliError::io(std::path::Path::new("<csv>"), e))?;
    Ok(())
}

pub fn write_curve<W: Write>(out: W, points: &[CurvePoint]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_COLUMNS)?;
    for p in points {
        w.write_record([
            fmt_f64(p.eps),
            fmt_f64(p.entropy_network),
            fmt_f64(p.entropy_unitary_scaled),
            fmt_f64(p.entropy_hybrid),
        ])?;
    }
    w.flush().map_err(|e| CliError::io(std::path::Path::new("<csv>"), e))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn worked() -> ExperimentConfig {
        parse_config("[circuit]\nqubits = 2\ngates = 1\nmeasurements = 1\n[net]\ndims = [1, 1]\n").unwrap()
    }

    #[test]
    fn worked_example_entropy() {
        let r = bound(&worked()).unwrap();
        assert_eq!(r.params.hybrid_radius(), 1.0);
        assert!((r.entropy_at_gamma0.total - 103.49).abs() < 5e-3, "{}", r.entropy_at_gamma0.total);
        assert_eq!(r.breakdown.total, 2.0 * r.breakdown.contraction * (r.breakdown.classical_term + r.breakdown.quantum_term) + r.breakdown.confidence_term);
    }

    #[test]
    fn curve_endpoints_and_monotonicity() {
        let c = entropy_curve(&worked(), 0.01, 1.0, 7).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c[0].eps, 0.01);
        assert_eq!(c[6].eps, 1.0);
        assert!(c.windows(2).all(|w| w[0].entropy_hybrid >= w[1].entropy_hybrid));
        for p in &c {
            assert!((p.entropy_network + p.entropy_unitary_scaled - p.entropy_hybrid).abs() <= 1e-12 * p.entropy_hybrid);
        }
        assert!(entropy_curve(&worked(), 1.0, 0.5, 3).is_err());
        assert!(entropy_curve(&worked(), 0.5, 1.0, 0).is_err());
    }

    #[test]
    fn csv_is_round_trip_exact() {
        let p = CurvePoint {
            eps: 0.1,
            entropy_network: 1.0 / 3.0,
            entropy_unitary_scaled: std::f64::consts::PI,
            entropy_hybrid: 1e-300,
        };
        let mut buf = Vec::new();
        write_curve(&mut buf, &[p]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row, vec![0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300]);
        assert_eq!(text.lines().next().unwrap(), "eps,entropy_network,entropy_unitary_scaled,entropy_hybrid");
    }
}
