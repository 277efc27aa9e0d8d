use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng::stream_rng;
use crate::hybrid::{HybridModel, SampleSet};
use crate::math::sqrt;
use crate::{Error, Result};

/// Largest sample size for which every sign pattern is enumerated.
pub const MAX_EXHAUSTIVE_SAMPLES: usize = 20;

/// Estimate of `E_σ sup_h (1/N) Σ σ_i h(z_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RademacherEstimate {
    pub mean: f64,
    /// Zero for exhaustive enumeration.
    pub std_error: f64,
    pub draws: usize,
    pub exhaustive: bool,
}

/// Values `h(z_i)` of a finite scalar hypothesis grid: one row per hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisTable {
    rows: Vec<Vec<f64>>,
    samples: usize,
}

impl HypothesisTable {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let samples = rows.first().map(Vec::len).ok_or_else(|| Error::param("grid", "no hypotheses"))?;
        if samples == 0 {
            return Err(Error::param("X", "sample is empty"));
        }
        if rows.iter().any(|r| r.len() != samples) {
            return Err(Error::Shape("rows have different lengths".into()));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::param("grid", "non-finite hypothesis value"));
        }
        Ok(Self { rows, samples })
    }

    /// Evaluates scalar-output models on `x`.
    pub fn from_models(models: &[HybridModel], x: &SampleSet) -> Result<Self> {
        let mut rows = Vec::with_capacity(models.len());
        for m in models {
            if m.output_dim() != 1 {
                return Err(Error::Shape(format!(
                    "Rademacher estimates need scalar outputs, model has {}",
                    m.output_dim()
                )));
            }
            rows.push(m.predict_many(x.inputs())?.into_iter().map(|v| v[0]).collect());
        }
        Self::new(rows)
    }

    pub fn hypotheses(&self) -> usize {
        self.rows.len()
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    fn sup_correlation(&self, signs: impl Fn(usize) -> f64) -> f64 {
        let n = self.samples as f64;
        self.rows
            .iter()
            .map(|r| r.iter().enumerate().map(|(i, v)| signs(i) * v).sum::<f64>() / n)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Exact expectation over all `2^N` sign vectors.
pub fn exhaustive_rademacher(table: &HypothesisTable) -> Result<RademacherEstimate> {
    let n = table.samples;
    if n > MAX_EXHAUSTIVE_SAMPLES {
        return Err(Error::param(
            "N",
            format!("exhaustive enumeration limited to N <= {MAX_EXHAUSTIVE_SAMPLES}, got {n}"),
        ));
    }
    let patterns = 1usize << n;
    let total: f64 = (0..patterns)
        .map(|mask| table.sup_correlation(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }))
        .sum();
    Ok(RademacherEstimate {
        mean: total / patterns as f64,
        std_error: 0.0,
        draws: patterns,
        exhaustive: true,
    })
}

/// Monte Carlo average over `draws` sign vectors drawn from a generator
/// seeded by `seed`.
pub fn monte_carlo_rademacher(table: &HypothesisTable, draws: usize, seed: u64) -> Result<RademacherEstimate> {
    if draws == 0 {
        return Err(Error::param("draws", "must be at least 1"));
    }
    let mut rng = stream_rng(seed, 0);
    let mut signs = alloc::vec![0.0; table.samples];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..draws {
        for s in signs.iter_mut() {
            *s = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
        let v = table.sup_correlation(|i| signs[i]);
        sum += v;
        sum_sq += v * v;
    }
    let d = draws as f64;
    let mean = sum / d;
    let std_error = if draws > 1 {
        sqrt(((sum_sq - d * mean * mean) / (d - 1.0)).max(0.0) / d)
    } else {
        0.0
    };
    Ok(RademacherEstimate {
        mean,
        std_error,
        draws,
        exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_hypothesis() {
        let t = HypothesisTable::new(vec![vec![0.0; 5]]).unwrap();
        assert_eq!(exhaustive_rademacher(&t).unwrap().mean, 0.0);
        assert_eq!(monte_carlo_rademacher(&t, 100, 3).unwrap().mean, 0.0);
    }

    #[test]
    fn two_constants() {
        let t = HypothesisTable::new(vec![vec![1.0, 1.0], vec![-1.0, -1.0]]).unwrap();
        assert_eq!(exhaustive_rademacher(&t).unwrap().mean, 0.5);
    }

    #[test]
    fn singleton_is_zero() {
        let t = HypothesisTable::new(vec![vec![0.3, -1.2, 0.7, 2.0, 0.1, -0.4, 0.9, 1.1, -0.2, 0.5, 0.6, -0.8]]).unwrap();
        assert!(exhaustive_rademacher(&t).unwrap().mean.abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let t = HypothesisTable::new(vec![vec![1.0, 0.5, -0.2], vec![-1.0, 0.1, 0.4]]).unwrap();
        let a = monte_carlo_rademacher(&t, 500, 9).unwrap();
        assert_eq!(a, monte_carlo_rademacher(&t, 500, 9).unwrap());
        let exact = exhaustive_rademacher(&t).unwrap().mean;
        assert!((a.mean - exact).abs() < 5.0 * a.std_error + 1e-12);
    }

    #[test]
    fn errors() {
        assert!(HypothesisTable::new(vec![]).is_err());
        assert!(HypothesisTable::new(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        let big = HypothesisTable::new(vec![vec![0.0; 21]]).unwrap();
        assert!(exhaustive_rademacher(&big).is_err());
        assert!(monte_carlo_rademacher(&big, 0, 1).is_err());
    }
}
