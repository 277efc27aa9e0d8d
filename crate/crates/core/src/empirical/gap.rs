use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::rng::stream_rng;
use super::sampling::{random_model, uniform_ball};
use crate::bounds::{generalization_bound_hybrid, BoundBreakdown, BoundParams};
use crate::hybrid::{loss, train, HybridModel, LossSpec, SampleSet, TrainOptions};
use crate::math::sqrt;
use crate::net::Activation;
use crate::qcore::CircuitSpec;
use crate::{Error, Result};

/// Label given to the synthetic data protocol in run metadata.
pub const PROTOCOL: &str = "teacher-student: random hybrid teacher of the student's class, inputs uniform in an l2 ball, Gaussian label noise; own construction";

const TEACHER_STREAM: u64 = 0;
const STUDENT_STREAM: u64 = 1;
const TEST_STREAM: u64 = 2;
const TRAIN_STREAM_BASE: u64 = 1 << 32;

/// Where the student starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudentInit {
    /// Independent random model of the same class.
    #[default]
    Random,
    /// A copy of the teacher.
    Teacher,
}

/// One teacher-student generalization-gap study.
#[derive(Debug, Clone, PartialEq)]
pub struct GapExperiment {
    pub circuit: CircuitSpec,
    /// `[n, d_1, ..., d_k]`; `n` must equal the measurement count.
    pub layer_dims: Vec<usize>,
    pub alpha: f64,
    pub activation: Activation,
    /// Frobenius norm of the random layers as a fraction of `alpha`.
    pub weight_fill: f64,
    pub loss: LossSpec,
    pub input_dim: usize,
    pub input_radius: f64,
    /// Standard deviation of the Gaussian label noise.
    pub noise: f64,
    /// Training set sizes, ascending.
    pub sizes: Vec<usize>,
    /// Test set size as a multiple of the largest training size.
    pub test_multiplier: usize,
    pub training: TrainOptions,
    pub student: StudentInit,
    pub delta: f64,
    pub c_conf: Option<f64>,
    pub seeds: Vec<u64>,
}

impl GapExperiment {
    pub fn validate(&self) -> Result<()> {
        if self.layer_dims.len() < 2 {
            return Err(Error::param("layer_dims", "need at least one layer"));
        }
        if self.layer_dims[0] != self.circuit.measurement_count() {
            return Err(Error::Shape(format!(
                "network input dimension {} differs from measurement count {}",
                self.layer_dims[0],
                self.circuit.measurement_count()
            )));
        }
        if self.input_dim == 0 || self.input_dim > self.circuit.qubits() {
            return Err(Error::param("input_dim", "must lie in 1..=qubits"));
        }
        if !(self.input_radius > 0.0 && self.input_radius.is_finite()) {
            return Err(Error::param("input_radius", "must be positive"));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::param("noise", "must be non-negative"));
        }
        if self.sizes.is_empty() || self.sizes[0] == 0 || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("sizes", "must be positive and strictly ascending"));
        }
        if self.test_multiplier == 0 {
            return Err(Error::param("test_multiplier", "must be at least 1"));
        }
        if self.seeds.is_empty() {
            return Err(Error::param("seeds", "need at least one seed"));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::param("delta", "must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn test_size(&self) -> usize {
        self.test_multiplier * self.sizes.last().copied().unwrap_or(0)
    }

    /// Every `(N, seed)` cell in output order.
    pub fn cells(&self) -> Vec<(usize, u64)> {
        let mut cells: Vec<(usize, u64)> =
            self.sizes.iter().flat_map(|&n| self.seeds.iter().map(move |&s| (n, s))).collect();
        cells.sort_unstable();
        cells
    }

    fn model<R: Rng>(&self, rng: &mut R) -> Result<HybridModel> {
        random_model(rng, &self.circuit, &self.layer_dims, self.alpha, self.activation, self.weight_fill)
    }

    fn sample<R: Rng>(&self, rng: &mut R, teacher: &HybridModel, n: usize) -> Result<SampleSet> {
        let inputs: Vec<Vec<f64>> = (0..n).map(|_| uniform_ball(rng, self.input_dim, self.input_radius)).collect();
        let mut labels = teacher.predict_many(&inputs)?;
        for y in labels.iter_mut().flatten() {
            let e: f64 = StandardNormal.sample(rng);
            *y += self.noise * e;
        }
        SampleSet::new(inputs, labels)
    }
}

/// One `(seed, N)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub seed: u64,
    pub n: usize,
    pub train_risk: f64,
    pub test_risk: f64,
    /// `test_risk − train_risk`.
    pub gap: f64,
    /// Standard error of `gap` from the per-sample loss variances.
    pub gap_std_error: f64,
    pub bound: BoundBreakdown,
    /// Training diverged; the risks are those of the initial student.
    pub diverged: bool,
}

fn losses(model: &HybridModel, spec: &LossSpec, data: &SampleSet) -> Result<Vec<f64>> {
    let preds = model.predict_many(data.inputs())?;
    preds.iter().zip(data.labels()).map(|(p, y)| loss(spec, p, y)).collect()
}

fn mean_and_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 {
        v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Trains a student on `n` teacher-labelled samples drawn under `seed` and
/// measures its gap on a fresh test set. The teacher, the initial student and
/// the test set depend on `seed` only; the training set on `(seed, n)`.
pub fn run_gap_cell(exp: &GapExperiment, seed: u64, n: usize) -> Result<GapRecord> {
    exp.validate()?;
    let teacher = exp.model(&mut stream_rng(seed, TEACHER_STREAM))?;
    let init = match exp.student {
        StudentInit::Random => exp.model(&mut stream_rng(seed, STUDENT_STREAM))?,
        StudentInit::Teacher => teacher.clone(),
    };
    let test = exp.sample(&mut stream_rng(seed, TEST_STREAM), &teacher, exp.test_size())?;
    let data = exp.sample(&mut stream_rng(seed, TRAIN_STREAM_BASE + n as u64), &teacher, n)?;

    let (student, diverged) = match train(&init, &exp.loss, &data, &exp.training) {
        Ok(m) => (m, false),
        Err(Error::Divergence { .. }) => (init, true),
        Err(e) => return Err(e),
    };
    let (train_risk, train_var) = mean_and_var(&losses(&student, &exp.loss, &data)?);
    let (test_risk, test_var) = mean_and_var(&losses(&student, &exp.loss, &test)?);
    let params = BoundParams::for_model(&student, &exp.loss, n, exp.delta, exp.c_conf)?;
    Ok(GapRecord {
        seed,
        n,
        train_risk,
        test_risk,
        gap: test_risk - train_risk,
        gap_std_error: sqrt(train_var / n as f64 + test_var / test.len() as f64),
        bound: generalization_bound_hybrid(&params)?,
        diverged,
    })
}

/// Every cell of `exp`, sorted by `(N, seed)`.
pub fn run_gap_experiment(exp: &GapExperiment) -> Result<Vec<GapRecord>> {
    exp.validate()?;
    exp.cells().into_iter().map(|(n, s)| run_gap_cell(exp, s, n)).collect()
}

/// Median of the gaps at sample size `n`.
pub fn median_gap(records: &[GapRecord], n: usize) -> Option<f64> {
    let mut g: Vec<f64> = records.iter().filter(|r| r.n == n).map(|r| r.gap).collect();
    if g.is_empty() {
        return None;
    }
    g.sort_by(f64::total_cmp);
    let m = g.len() / 2;
    Some(if g.len() % 2 == 1 { g[m] } else { 0.5 * (g[m - 1] + g[m]) })
}
