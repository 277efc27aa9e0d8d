//! Experiment configuration: TOML (or JSON) documents, defaults and
//! cross-field validation.

use std::fmt;
use std::path::Path;

use hybound_core::bounds::BoundParams;
use hybound_core::empirical::{GapExperiment, StudentInit};
use hybound_core::hybrid::{LossSpec, TrainOptions};
use hybound_core::net::Activation;
use hybound_core::qcore::{CircuitSpec, GateSite, Observable, MAX_QUBITS};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Every random draw of a run is derived from one of these.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Default destination of `experiment`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub circuit: CircuitConfig,
    pub net: NetConfig,
    #[serde(default)]
    pub loss: LossConfig,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub training: TrainingConfig,
    #[serde(default)]
    pub bound: BoundConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// Slot `t` acts on `(t mod (q-1), t mod (q-1) + 1)`; the whole
    /// sequence is applied `repetitions` times.
    #[default]
    Ladder,
    /// Sites listed explicitly in `circuit.sites`.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub slot: usize,
    pub targets: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub qubits: usize,
    /// Independent gate slots (`T`).
    pub gates: usize,
    /// Largest number of applications of one slot.
    #[serde(default = "one")]
    pub repetitions: usize,
    /// Pauli-Z read out on qubits `0..measurements`. Defaults to `qubits`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurements: Option<usize>,
    #[serde(default)]
    pub layout: Layout,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sites: Vec<SiteConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivationName {
    Relu,
    #[default]
    Tanh,
    Identity,
}

impl From<ActivationName> for Activation {
    fn from(a: ActivationName) -> Self {
        match a {
            ActivationName::Relu => Activation::Relu,
            ActivationName::Tanh => Activation::Tanh,
            ActivationName::Identity => Activation::Identity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetConfig {
    /// `[n, d_1, ..., d_k]`; the depth is `dims.len() - 1`.
    pub dims: Vec<usize>,
    #[serde(default = "unit")]
    pub alpha: f64,
    #[serde(default)]
    pub activation: ActivationName,
    /// Frobenius norm of freshly drawn layers as a fraction of `alpha`.
    #[serde(default = "unit")]
    pub weight_fill: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossConfig {
    #[serde(default = "default_clip")]
    pub clip: f64,
    /// Defaults to `2√(clip/d)` with `d` the output dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            clip: default_clip(),
            lipschitz: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    /// Defaults to `circuit.qubits`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_dim: Option<usize>,
    #[serde(default = "default_radius")]
    pub input_radius: f64,
    /// Standard deviation of the label noise.
    #[serde(default = "default_noise")]
    pub noise: f64,
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_test_multiplier")]
    pub test_multiplier: usize,
    #[serde(default)]
    pub student: StudentInit,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            input_dim: None,
            input_radius: default_radius(),
            noise: default_noise(),
            sizes: default_sizes(),
            test_multiplier: default_test_multiplier(),
            student: StudentInit::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingConfig {
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            steps: default_steps(),
            learning_rate: default_lr(),
            fd_step: default_fd_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Defaults to `3 · loss.clip`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_conf: Option<f64>,
    /// Sample size used by `bound` and `entropy-curve`. Defaults to the
    /// largest of `data.sizes`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            delta: default_delta(),
            c_conf: None,
            samples: None,
        }
    }
}

fn one() -> usize {
    1
}
fn unit() -> f64 {
    1.0
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_clip() -> f64 {
    4.0
}
fn default_radius() -> f64 {
    3.0
}
fn default_noise() -> f64 {
    0.3
}
fn default_sizes() -> Vec<usize> {
    vec![50, 100, 200, 400]
}
fn default_test_multiplier() -> usize {
    20
}
fn default_steps() -> usize {
    150
}
fn default_lr() -> f64 {
    0.5
}
fn default_fd_step() -> f64 {
    1e-4
}
fn default_delta() -> f64 {
    0.05
}

/// One broken invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{}", syntax_message(*.line, .message))]
    Syntax { line: Option<usize>, message: String },
    #[error("invalid configuration:\n{}", list(.0))]
    Invalid(Vec<Violation>),
}

fn syntax_message(line: Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("syntax error at line {l}: {message}"),
        None => format!("syntax error: {message}"),
    }
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| format!("  - {x}")).collect::<Vec<_>>().join("\n")
}

impl ConfigError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ConfigError::Invalid(v) => v,
            ConfigError::Syntax { .. } => &[],
        }
    }
}

/// Parses and validates a TOML document, filling derived defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().trim().to_string(),
    })?;
    finish(raw)
}

/// Same as [`parse_config`] for a JSON document.
pub fn parse_config_json(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: Some(e.line()),
        message: e.to_string(),
    })?;
    finish(raw)
}

/// Reads `path`, choosing JSON for a `.json` extension and TOML otherwise.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, crate::CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::io(path, e))?;
    let cfg = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_config_json(&text)
    } else {
        parse_config(&text)
    };
    Ok(cfg?)
}

fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())].iter().filter(|&&b| b == b'\n').count() + 1
}

fn finish(mut cfg: ExperimentConfig) -> Result<ExperimentConfig, ConfigError> {
    let violations = cfg.violations();
    if !violations.is_empty() {
        return Err(ConfigError::Invalid(violations));
    }
    let q = cfg.circuit.qubits;
    cfg.circuit.measurements.get_or_insert(q);
    cfg.data.input_dim.get_or_insert(q);
    let out = *cfg.net.dims.last().expect("validated");
    let clip = cfg.loss.clip;
    cfg.loss.lipschitz.get_or_insert(2.0 * (clip / out as f64).sqrt());
    cfg.bound.c_conf.get_or_insert(3.0 * clip);
    let largest = *cfg.data.sizes.last().expect("validated");
    cfg.bound.samples.get_or_insert(largest);
    Ok(cfg)
}

fn positive(v: f64) -> bool {
    v > 0.0 && v.is_finite()
}

impl ExperimentConfig {
    /// Canonical TOML form; parsing it gives back `self`.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always representable")
    }

    pub fn measurements(&self) -> usize {
        self.circuit.measurements.unwrap_or(self.circuit.qubits)
    }

    pub fn depth(&self) -> usize {
        self.net.dims.len().saturating_sub(1)
    }

    /// Every broken invariant, in document order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut bad = |field: &str, message: String| {
            out.push(Violation {
                field: field.to_string(),
                message,
            })
        };
        let c = &self.circuit;
        let q = c.qubits;
        if self.seeds.is_empty() {
            bad("seeds", "at least one seed is required".into());
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            bad("seeds", "seeds must be distinct".into());
        }
        if self.seeds.iter().any(|&s| s > i64::MAX as u64) {
            bad("seeds", format!("seeds must be at most {}", i64::MAX));
        }
        if q > MAX_QUBITS {
            bad("circuit.qubits", format!("qubits ≤ {MAX_QUBITS}, got {q}"));
        }
        if q < 2 {
            bad("circuit.qubits", format!("qubits ≥ 2, got {q}"));
        }
        if c.gates == 0 {
            bad("circuit.gates", "at least one gate slot is required".into());
        }
        if c.repetitions == 0 {
            bad("circuit.repetitions", "must be at least 1".into());
        }
        let n = self.measurements();
        if n == 0 || n > q {
            bad("circuit.measurements", format!("must lie in 1..={q}, got {n}"));
        }
        match c.layout {
            Layout::Ladder if !c.sites.is_empty() => {
                bad("circuit.sites", "only allowed with layout = \"custom\"".into());
            }
            Layout::Custom if c.sites.is_empty() => {
                bad("circuit.sites", "layout = \"custom\" needs at least one site".into());
            }
            _ => {}
        }
        let mut uses = vec![0usize; c.gates];
        for (i, s) in c.sites.iter().enumerate() {
            let [a, b] = s.targets;
            if a >= q || b >= q || a == b {
                bad(
                    &format!("circuit.sites[{i}].targets"),
                    format!("need two distinct qubits below {q}, got [{a}, {b}]"),
                );
            }
            match uses.get_mut(s.slot) {
                Some(u) => *u += 1,
                None => bad(
                    &format!("circuit.sites[{i}].slot"),
                    format!("slot {} out of range 0..{}", s.slot, c.gates),
                ),
            }
        }
        for (slot, &u) in uses.iter().enumerate() {
            if u > c.repetitions {
                bad(
                    "circuit.repetitions",
                    format!("slot {slot} is used {u} times, limit {}", c.repetitions),
                );
            }
        }

        let dims = &self.net.dims;
        if dims.len() < 2 {
            bad("net.dims", "need the input dimension and at least one layer".into());
        }
        if dims.contains(&0) {
            bad("net.dims", "every dimension must be positive".into());
        }
        if let Some(&d0) = dims.first() {
            if d0 != n {
                bad(
                    "net.dims[0]",
                    format!("network input dimension {d0} must equal circuit.measurements = {n}"),
                );
            }
        }
        if !positive(self.net.alpha) {
            bad("net.alpha", format!("must be positive and finite, got {}", self.net.alpha));
        }
        if !(self.net.weight_fill > 0.0 && self.net.weight_fill <= 1.0) {
            bad("net.weight_fill", format!("must lie in (0, 1], got {}", self.net.weight_fill));
        }

        if !positive(self.loss.clip) {
            bad("loss.clip", format!("must be positive and finite, got {}", self.loss.clip));
        }
        if let Some(l) = self.loss.lipschitz {
            if !positive(l) {
                bad("loss.lipschitz", format!("must be positive and finite, got {l}"));
            }
        }

        let d = &self.data;
        if let Some(dim) = d.input_dim {
            if dim == 0 || dim > q {
                bad("data.input_dim", format!("must lie in 1..={q}, got {dim}"));
            }
        }
        if !positive(d.input_radius) {
            bad("data.input_radius", format!("must be positive and finite, got {}", d.input_radius));
        }
        if !(d.noise >= 0.0 && d.noise.is_finite()) {
            bad("data.noise", format!("must be non-negative and finite, got {}", d.noise));
        }
        if d.sizes.is_empty() || d.sizes.contains(&0) {
            bad("data.sizes", "need at least one positive sample size".into());
        }
        if d.sizes.windows(2).any(|w| w[0] >= w[1]) {
            bad("data.sizes", "sample sizes must be strictly ascending".into());
        }
        if d.test_multiplier == 0 {
            bad("data.test_multiplier", "must be at least 1".into());
        }

        let t = &self.training;
        if !positive(t.learning_rate) {
            bad("training.learning_rate", format!("must be positive and finite, got {}", t.learning_rate));
        }
        if !positive(t.fd_step) {
            bad("training.fd_step", format!("must be positive and finite, got {}", t.fd_step));
        }

        let b = &self.bound;
        if !(b.delta > 0.0 && b.delta <= 1.0) {
            bad("bound.delta", format!("must lie in (0, 1], got {}", b.delta));
        }
        if let Some(c) = b.c_conf {
            if !positive(c) {
                bad("bound.c_conf", format!("must be positive and finite, got {c}"));
            }
        }
        if b.samples == Some(0) {
            bad("bound.samples", "must be at least 1".into());
        }
        out
    }

    pub fn circuit_spec(&self) -> hybound_core::Result<CircuitSpec> {
        let c = &self.circuit;
        match c.layout {
            Layout::Ladder => CircuitSpec::ladder(c.qubits, c.gates, c.repetitions, self.measurements()),
            Layout::Custom => {
                let sites = c
                    .sites
                    .iter()
                    .map(|s| GateSite {
                        targets: (s.targets[0], s.targets[1]),
                        slot: s.slot,
                    })
                    .collect();
                let obs = (0..self.measurements()).map(Observable::pauli_z).collect();
                CircuitSpec::new(c.qubits, c.gates, sites, c.repetitions, obs)
            }
        }
    }

    pub fn loss_spec(&self) -> hybound_core::Result<LossSpec> {
        let out = *self.net.dims.last().unwrap_or(&1);
        let spec = LossSpec::clipped_square(self.loss.clip, out)?;
        match self.loss.lipschitz {
            Some(l) => spec.with_lipschitz(l),
            None => Ok(spec),
        }
    }

    /// Parameters of the configured class at `bound.samples`.
    pub fn bound_params(&self) -> hybound_core::Result<BoundParams> {
        let spec = self.circuit_spec()?;
        let loss = self.loss_spec()?;
        let dims = &self.net.dims;
        let k = self.depth();
        let n = spec.measurement_count();
        let beta = spec.beta();
        let params = BoundParams {
            gates: spec.slots(),
            max_repetitions: spec.max_repetitions(),
            layers: k,
            rows: dims[1..].iter().copied().max().unwrap_or(0),
            cols: dims[..k].iter().copied().max().unwrap_or(0),
            measurements: n,
            alpha: self.net.alpha,
            beta,
            lipschitz: Activation::from(self.net.activation).lipschitz(),
            radius: beta * (n as f64).sqrt(),
            samples: self.bound.samples.or(self.data.sizes.last().copied()).unwrap_or(0),
            delta: self.bound.delta,
            loss_lipschitz: loss.lipschitz,
            loss_bound: loss.clip,
            c_conf: self.bound.c_conf.unwrap_or(3.0 * loss.clip),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn gap_experiment(&self) -> hybound_core::Result<GapExperiment> {
        let mut training = TrainOptions::new(self.training.steps, self.training.learning_rate);
        training.fd_step = self.training.fd_step;
        let exp = GapExperiment {
            circuit: self.circuit_spec()?,
            layer_dims: self.net.dims.clone(),
            alpha: self.net.alpha,
            activation: self.net.activation.into(),
            weight_fill: self.net.weight_fill,
            loss: self.loss_spec()?,
            input_dim: self.data.input_dim.unwrap_or(self.circuit.qubits),
            input_radius: self.data.input_radius,
            noise: self.data.noise,
            sizes: self.data.sizes.clone(),
            test_multiplier: self.data.test_multiplier,
            training,
            student: self.data.student,
            delta: self.bound.delta,
            c_conf: self.bound.c_conf,
            seeds: self.seeds.clone(),
        };
        exp.validate()?;
        Ok(exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[circuit]\nqubits = 3\ngates = 4\n\n[net]\ndims = [3, 3, 1]\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.seeds, vec![0]);
        assert_eq!(cfg.circuit.repetitions, 1);
        assert_eq!(cfg.circuit.measurements, Some(3));
        assert_eq!(cfg.circuit.layout, Layout::Ladder);
        assert_eq!(cfg.net.alpha, 1.0);
        assert_eq!(cfg.net.activation, ActivationName::Tanh);
        assert_eq!(cfg.loss.clip, 4.0);
        assert_eq!(cfg.loss.lipschitz, Some(4.0));
        assert_eq!(cfg.data.input_dim, Some(3));
        assert_eq!(cfg.data.sizes, vec![50, 100, 200, 400]);
        assert_eq!(cfg.data.test_multiplier, 20);
        assert_eq!(cfg.training.steps, 150);
        assert_eq!(cfg.bound.delta, 0.05);
        assert_eq!(cfg.bound.c_conf, Some(12.0));
        assert_eq!(cfg.bound.samples, Some(400));
    }

    #[test]
    fn too_many_qubits() {
        let err = parse_config(&MINIMAL.replace("qubits = 3", "qubits = 12")).unwrap_err();
        assert!(err.violations().iter().any(|v| v.field == "circuit.qubits" && v.message.contains("qubits ≤ 10")));
    }

    #[test]
    fn input_dimension_mismatch_names_both_fields() {
        let err = parse_config(&MINIMAL.replace("[3, 3, 1]", "[2, 3, 1]")).unwrap_err();
        let v = &err.violations()[0];
        assert_eq!(v.field, "net.dims[0]");
        assert!(v.message.contains("circuit.measurements"));
    }

    #[test]
    fn all_violations_are_reported() {
        let text = "seeds = []\n[circuit]\nqubits = 12\ngates = 0\n[net]\ndims = [2, 1]\nalpha = -1.0\n[data]\nsizes = [100, 50]\n[bound]\ndelta = 2.0\n";
        let err = parse_config(text).unwrap_err();
        assert_eq!(err.violations().len(), 7, "{err}");
        let fields: Vec<&str> = err.violations().iter().map(|v| v.field.as_str()).collect();
        for f in ["seeds", "circuit.qubits", "circuit.gates", "net.dims[0]", "net.alpha", "data.sizes", "bound.delta"] {
            assert!(fields.contains(&f), "{f} missing from {fields:?}");
        }
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let err = parse_config("[circuit]\nqubits = 3\ngates = = 4\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: Some(3), .. }), "{err:?}");
        let err = parse_config("[circuit]\nqubits = 3\ngates = 4\nflavour = 1\n[net]\ndims = [3, 1]\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: Some(4), .. }), "{err:?}");
    }

    #[test]
    fn round_trip() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
        assert_eq!(parse_config_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn custom_layout() {
        let text = "[circuit]\nqubits = 3\ngates = 2\nrepetitions = 2\nlayout = \"custom\"\nsites = [{ slot = 0, targets = [0, 2] }, { slot = 1, targets = [1, 2] }, { slot = 0, targets = [2, 1] }]\n[net]\ndims = [3, 1]\n";
        let cfg = parse_config(text).unwrap();
        let spec = cfg.circuit_spec().unwrap();
        assert_eq!(spec.sites().len(), 3);
        assert_eq!(spec.sites()[2].targets, (2, 1));
        let over = text.replace("repetitions = 2", "repetitions = 1");
        let err = parse_config(&over).unwrap_err();
        assert!(err.violations().iter().any(|v| v.field == "circuit.repetitions"));
    }

    #[test]
    fn class_parameters_match_a_model_of_the_class() {
        let cfg = parse_config(MINIMAL).unwrap();
        let exp = cfg.gap_experiment().unwrap();
        let mut rng = hybound_core::empirical::stream_rng(3, 0);
        let model = hybound_core::empirical::sampling::random_model(
            &mut rng,
            &exp.circuit,
            &exp.layer_dims,
            exp.alpha,
            exp.activation,
            exp.weight_fill,
        )
        .unwrap();
        let from_model = BoundParams::for_model(&model, &exp.loss, 400, 0.05, None).unwrap();
        assert_eq!(cfg.bound_params().unwrap(), from_model);
    }
}
