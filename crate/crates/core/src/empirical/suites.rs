//! Invariant suites. Each check counts trials and violations and records the
//! worst observed value so reports can be compared across runs.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::cover::{
    greedy_cover_number, greedy_packing_number, Euclidean, Frobenius, MetricSpaceSample, SampleL2, Spectral,
};
use super::gap::{median_gap, GapExperiment, GapRecord, StudentInit};
use super::quadrature::{integrate, integrate_to_infinity};
use super::rademacher::{exhaustive_rademacher, monte_carlo_rademacher, HypothesisTable};
use super::rng::stream_rng;
use super::sampling::{random_model, random_network, random_theta, uniform_ball};
use crate::bounds::{
    dudley_j, entropy_hybrid, entropy_l2_ball, entropy_fc_layer, entropy_two_qubit_unitary, network_entropy,
    rademacher_bound_hybrid, upper_gamma_three_halves, BoundParams,
};
use crate::hybrid::{HybridModel, LossSpec, SampleSet, TrainOptions};
use crate::math::{exp, log, pow, sqrt};
use crate::net::{output_diff_factor, Activation, BoundedLayer, NetworkStack};
use crate::qcore::{
    build_unitary, diamond_distance_unitary, encode, generator_index, measure_vector, run_circuit,
    telescope_bound, CircuitSpec, ComplexMatrix, Pauli, GENERATOR_COUNT,
};
use crate::Result;

/// Absolute slack for the chained inequalities.
pub const CHAIN_TOL: f64 = 1e-9;
pub const GAMMA_TOL: f64 = 1e-8;
pub const DUDLEY_REL_TOL: f64 = 1e-6;
pub const DUDLEY_ANCHOR: f64 = 5.3174;
pub const DUDLEY_ANCHOR_TOL: f64 = 1e-4;
/// Largest allowed ratio of the median gap at `4N` to the one at `N`.
pub const GAP_DECAY_RATIO: f64 = 0.6;
pub const SINGLE_LAYER_RATIO: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub violations: usize,
    /// Violations tolerated before the check fails.
    pub allowed_violations: usize,
    /// Largest error, excess or ratio seen, depending on the check.
    pub worst: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self {
            suite: suite.to_string(),
            seed,
            checks,
            passed,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tally {
    name: &'static str,
    trials: usize,
    violations: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            trials: 0,
            violations: 0,
            worst: f64::NEG_INFINITY,
        }
    }

    /// Records `value`, a violation when `!ok`.
    fn record(&mut self, value: f64, ok: bool) {
        self.trials += 1;
        if !ok {
            self.violations += 1;
        }
        if value > self.worst || self.worst.is_nan() {
            self.worst = value;
        }
    }

    /// Records the excess `lhs − rhs`, violated beyond `tol`.
    fn bound(&mut self, lhs: f64, rhs: f64, tol: f64) {
        self.record(lhs - rhs, lhs <= rhs + tol);
    }

    fn finish(self, allowed: usize, detail: &str) -> CheckReport {
        CheckReport {
            name: self.name.to_string(),
            trials: self.trials,
            violations: self.violations,
            allowed_violations: allowed,
            worst: if self.trials == 0 { 0.0 } else { self.worst },
            passed: self.trials > 0 && self.violations <= allowed,
            detail: detail.to_string(),
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}

fn diff_norm(a: &[f64], b: &[f64]) -> f64 {
    sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * pow(b / a, i as f64 / (n - 1) as f64)).collect()
}

// ---------------------------------------------------------------- gamma

/// `Γ(3/2, x)` by quadrature of `∫ₓ^∞ √t e^{-t} dt`.
pub fn gamma_three_halves_quadrature(x: f64) -> Result<f64> {
    Ok(integrate_to_infinity(|t| sqrt(t) * exp(-t), x, 1e-14, 1e-13)?.value)
}

/// `∫₀^{γ₀} √(max(0, log(C/ε))) dε` by quadrature.
pub fn dudley_quadrature(c: f64, gamma0: f64) -> Result<f64> {
    let f = |e: f64| sqrt(log(c / e).max(0.0));
    let upper = gamma0.min(c);
    Ok(integrate(f, 0.0, upper, 0.0, 1e-11)?.value)
}

/// Closed forms of `Γ(3/2, ·)` and the Dudley integral against quadrature,
/// and the classical Rademacher summand against its own integral.
pub fn gamma_suite(seed: u64) -> Result<SuiteReport> {
    let mut gamma = Tally::new("gamma-identity");
    for x in linspace(0.0, 20.0, 50) {
        let err = (upper_gamma_three_halves(x)? - gamma_three_halves_quadrature(x)?).abs();
        gamma.record(err, err <= GAMMA_TOL);
    }

    let mut rng = stream_rng(seed, 10);
    let mut dudley = Tally::new("dudley-closed-form");
    for _ in 0..100 {
        let c = pow(10.0, rng.random_range(-1.0..2.0));
        let gamma0 = c * rng.random_range(0.01..=1.0);
        let closed = dudley_j(c, gamma0)?;
        let quad = dudley_quadrature(c, gamma0)?;
        let rel = (closed - quad).abs() / quad.abs();
        dudley.record(rel, rel <= DUDLEY_REL_TOL);
    }

    let mut anchor = Tally::new("dudley-anchor");
    let a = dudley_j(6.0, 6.0)?;
    anchor.record((a - DUDLEY_ANCHOR).abs(), (a - DUDLEY_ANCHOR).abs() <= DUDLEY_ANCHOR_TOL);

    let mut pipeline = Tally::new("classical-term-quadrature");
    let p = BoundParams {
        gates: 4,
        layers: 2,
        rows: 2,
        cols: 2,
        measurements: 2,
        samples: 100,
        ..BoundParams::default()
    };
    let p = BoundParams {
        radius: p.hybrid_radius(),
        ..p
    };
    let r = rademacher_bound_hybrid(&p)?;
    let q = 12.0 * sqrt((p.layers * p.rows * p.cols) as f64) / sqrt(p.samples as f64)
        * dudley_quadrature(r.intermediate.c, r.intermediate.gamma0)?;
    let rel = (r.classical_term - q).abs() / q;
    pipeline.record(rel, rel <= DUDLEY_REL_TOL);

    Ok(SuiteReport::new(
        "gamma",
        seed,
        vec![
            gamma.finish(0, "|closed form - quadrature| <= 1e-8 on 50 points of [0, 20]"),
            dudley.finish(0, "relative error <= 1e-6 on 100 random (C, gamma0), gamma0 <= C"),
            anchor.finish(0, "J(6, 6) = 5.3174 +- 1e-4"),
            pipeline.finish(0, "classical summand vs quadrature, relative 1e-6"),
        ],
    ))
}

// ---------------------------------------------------------------- entropy

fn unitary_grid() -> Result<Vec<ComplexMatrix>> {
    let axes = [
        generator_index(Pauli::X, Pauli::X),
        generator_index(Pauli::Y, Pauli::Z),
        generator_index(Pauli::Z, Pauli::I),
        generator_index(Pauli::I, Pauli::Y),
    ];
    let values = linspace(-1.5, 1.5, 10);
    let mut out = Vec::with_capacity(10_000);
    for a in &values {
        for b in &values {
            for c in &values {
                for d in &values {
                    let mut theta = [0.0; GENERATOR_COUNT];
                    for (axis, v) in axes.iter().zip([a, b, c, d]) {
                        theta[axis.expect("non-identity product")] = *v;
                    }
                    out.push(build_unitary(&theta)?);
                }
            }
        }
    }
    Ok(out)
}

/// Networks whose weights run over an axis-aligned lattice, keeping those
/// inside every Frobenius ball.
fn network_grid(dims: &[usize], alpha: f64, steps: usize, activation: Activation) -> Result<Vec<NetworkStack>> {
    let shapes: Vec<(usize, usize)> = dims.windows(2).map(|w| (w[1], w[0])).collect();
    let count: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let values = linspace(-alpha, alpha, steps);
    let mut out = Vec::new();
    let mut idx = vec![0usize; count];
    loop {
        let flat: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        let mut offset = 0;
        let mut layers = Vec::with_capacity(shapes.len());
        let mut inside = true;
        for &(r, c) in &shapes {
            let w = DMatrix::from_row_slice(r, c, &flat[offset..offset + r * c]);
            offset += r * c;
            if w.norm() > alpha {
                inside = false;
                break;
            }
            layers.push(BoundedLayer::new(w, alpha)?);
        }
        if inside {
            out.push(NetworkStack::new(layers, activation)?);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == count {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < steps {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn outputs_of_networks(nets: &[NetworkStack], xs: &[Vec<f64>]) -> Result<Vec<Vec<Vec<f64>>>> {
    nets.iter()
        .map(|n| xs.iter().map(|x| n.forward(x)).collect::<Result<Vec<_>>>())
        .collect()
}

/// Every packing oracle against its entropy bound over a 10-point `ε` sweep,
/// plus the packing/cover sandwich.
pub fn entropy_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = stream_rng(seed, 20);

    let mut ball = Tally::new("l2-ball");
    let alpha = 1.0;
    for n in 1..=3usize {
        let points: Vec<Vec<f64>> = if n == 1 {
            linspace(-alpha, alpha, 2001).into_iter().map(|v| vec![v]).collect()
        } else {
            (0..3000).map(|_| uniform_ball(&mut rng, n, alpha)).collect()
        };
        let space = MetricSpaceSample::new(points, Euclidean)?;
        for eps in geomspace(0.05, 3.0, 10) {
            let lhs = log(greedy_packing_number(&space, eps)? as f64);
            ball.bound(lhs, entropy_l2_ball(n, alpha, eps)?, 0.0);
        }
    }

    let mut frob = Tally::new("frobenius-ball");
    for (m, n) in [(1usize, 2usize), (2, 1), (2, 2)] {
        let points: Vec<DMatrix<f64>> = (0..3000)
            .map(|_| DMatrix::from_vec(m, n, uniform_ball(&mut rng, m * n, alpha)))
            .collect();
        let space = MetricSpaceSample::new(points, Frobenius)?;
        for eps in geomspace(0.05, 3.0, 10) {
            let lhs = log(greedy_packing_number(&space, eps)? as f64);
            frob.bound(lhs, entropy_fc_layer(m, n, alpha, eps)?, 0.0);
        }
    }

    let mut unitary = Tally::new("unitary-grid");
    let grid = MetricSpaceSample::new(unitary_grid()?, Spectral)?;
    for eps in geomspace(0.05, 1.0, 10) {
        let lhs = log(greedy_packing_number(&grid, eps)? as f64);
        unitary.bound(lhs, entropy_two_qubit_unitary(eps, 1.0)?, 0.0);
    }

    let mut network = Tally::new("network-grid");
    let radius = 2.0;
    let xs1: Vec<Vec<f64>> = (0..16).map(|_| uniform_ball(&mut rng, 1, radius)).collect();
    let xs2: Vec<Vec<f64>> = (0..16).map(|_| uniform_ball(&mut rng, 2, radius)).collect();
    for (dims, steps, xs) in [(vec![2usize, 1], 41usize, &xs2), (vec![1, 2, 1], 7, &xs1)] {
        let nets = network_grid(&dims, alpha, steps, Activation::Tanh)?;
        let k = dims.len() - 1;
        let m = *dims[1..].iter().max().expect("layers");
        let n = *dims[..k].iter().max().expect("layers");
        let r = xs.iter().map(|x| norm(x)).fold(0.0, f64::max);
        let space = MetricSpaceSample::new(outputs_of_networks(&nets, xs)?, SampleL2)?;
        for eps in geomspace(0.02, 2.0 * r, 10) {
            let lhs = log(greedy_packing_number(&space, eps)? as f64);
            network.bound(lhs, network_entropy(k, m, n, r, 1.0, alpha, eps)?, 0.0);
        }
    }

    let mut hybrid = Tally::new("hybrid-grid");
    let circuit = CircuitSpec::ladder(2, 1, 1, 1)?;
    let xs: Vec<Vec<f64>> = (0..8).map(|_| uniform_ball(&mut rng, 2, 3.0)).collect();
    let angles = linspace(-1.5, 1.5, 15);
    let weights = linspace(-alpha, alpha, 21);
    let axes = [
        generator_index(Pauli::Y, Pauli::I).expect("non-identity"),
        generator_index(Pauli::X, Pauli::Z).expect("non-identity"),
    ];
    let mut tables = Vec::with_capacity(angles.len() * angles.len() * weights.len());
    for a in &angles {
        for b in &angles {
            let mut theta = vec![0.0; GENERATOR_COUNT];
            theta[axes[0]] = *a;
            theta[axes[1]] = *b;
            let slot_u = circuit.slot_unitaries(&theta)?;
            let feats = xs.iter().map(|x| circuit.features(&slot_u, x)).collect::<Result<Vec<_>>>()?;
            for w in &weights {
                tables.push(feats.iter().map(|z| vec![w * z[0]]).collect::<Vec<_>>());
            }
        }
    }
    let params = BoundParams {
        radius: 1.0,
        ..BoundParams::default()
    };
    let space = MetricSpaceSample::new(tables, SampleL2)?;
    for eps in geomspace(0.01, 2.0, 10) {
        let lhs = log(greedy_packing_number(&space, eps)? as f64);
        hybrid.bound(lhs, entropy_hybrid(&params, eps)?, 0.0);
    }

    let mut sandwich = Tally::new("packing-below-cover");
    for _ in 0..100 {
        let dim = rng.random_range(1..=3usize);
        let count = rng.random_range(1..=60usize);
        let pts: Vec<Vec<f64>> = (0..count).map(|_| uniform_ball(&mut rng, dim, 1.0)).collect();
        let space = MetricSpaceSample::new(pts, Euclidean)?;
        let eps = rng.random_range(0.05..1.0);
        let pack = greedy_packing_number(&space, eps)?;
        let cover = greedy_cover_number(&space, eps)?;
        sandwich.record(pack as f64 - cover as f64, pack <= cover);
    }

    Ok(SuiteReport::new(
        "entropy",
        seed,
        vec![
            ball.finish(0, "log packing(2eps) <= n log(3 alpha / eps), n = 1..3"),
            frob.finish(0, "log packing <= mn log(3 alpha / eps) for 1x2, 2x1, 2x2"),
            unitary.finish(0, "10^4-point theta grid, spectral norm, eps in [0.05, 1]"),
            network.finish(0, "weight lattices, k = 1 and 2, sample l2 metric"),
            hybrid.finish(0, "theta grid x weight grid, T = k = n = 1"),
            sandwich.finish(0, "greedy packing <= greedy cover on 100 random spaces"),
        ],
    ))
}

// ---------------------------------------------------------------- chains

fn random_pair_nets<R: Rng>(rng: &mut R, dims: &[usize], alpha: f64, act: Activation) -> Result<(NetworkStack, NetworkStack)> {
    let f1 = rng.random_range(0.05..=1.0);
    let f2 = rng.random_range(0.05..=1.0);
    Ok((random_network(rng, dims, alpha, act, f1)?, random_network(rng, dims, alpha, act, f2)?))
}

fn random_dims<R: Rng>(rng: &mut R, input: usize, depth: usize) -> Vec<usize> {
    let mut dims = vec![input];
    for _ in 0..depth {
        dims.push(rng.random_range(1..=4usize));
    }
    dims
}

fn random_activation<R: Rng>(rng: &mut R) -> Activation {
    [Activation::Relu, Activation::Tanh, Activation::Identity][rng.random_range(0..3usize)]
}

fn random_circuit<R: Rng>(rng: &mut R, max_qubits: usize) -> Result<CircuitSpec> {
    let q = rng.random_range(2..=max_qubits);
    let slots = rng.random_range(1..=4usize);
    let reps = rng.random_range(1..=2usize);
    let n = rng.random_range(1..=q);
    CircuitSpec::ladder(q, slots, reps, n)
}

fn sum_site_distance(circuit: &CircuitSpec, u: &[ComplexMatrix], v: &[ComplexMatrix]) -> Result<f64> {
    let us: Vec<ComplexMatrix> = circuit.site_unitaries(u).into_iter().cloned().collect();
    let vs: Vec<ComplexMatrix> = circuit.site_unitaries(v).into_iter().cloned().collect();
    Ok(0.5 * telescope_bound(&us, &vs)?)
}

/// Growth, contraction and telescoping inequalities of the network class,
/// the measurement chain through the diamond distance, and both
/// perturbation chains of the hybrid class, 1000 instances each.
pub fn telescope_suite(seed: u64) -> Result<SuiteReport> {
    const TRIALS: usize = 1000;
    let mut rng = stream_rng(seed, 30);

    let mut growth = Tally::new("growth");
    let mut contraction = Tally::new("contraction");
    let mut layers = Tally::new("layer-telescope");
    for _ in 0..TRIALS {
        let k = rng.random_range(1..=4usize);
        let input = rng.random_range(1..=4usize);
        let dims = random_dims(&mut rng, input, k);
        let alpha = rng.random_range(0.3..2.0);
        let act = random_activation(&mut rng);
        let (f, h) = random_pair_nets(&mut rng, &dims, alpha, act)?;
        let radius = rng.random_range(0.1..5.0);
        let x = uniform_ball(&mut rng, input, radius);
        let trace = f.forward_trace(&x)?;
        let worst = trace
            .layer_inputs
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm() - pow(alpha, i as f64) * norm(&x))
            .fold(f64::NEG_INFINITY, f64::max);
        growth.record(worst, worst <= CHAIN_TOL);

        let z2 = uniform_ball(&mut rng, input, radius);
        let lhs = diff_norm(&f.forward(&x)?, &f.forward(&z2)?);
        contraction.bound(lhs, output_diff_factor(k, 1.0, alpha)? * diff_norm(&x, &z2), CHAIN_TOL);

        let sum: f64 = f.layers().iter().zip(h.layers()).map(|(a, b)| (a.weights() - b.weights()).norm()).sum();
        let lhs = diff_norm(&f.forward(&x)?, &h.forward(&x)?);
        layers.bound(lhs, radius * pow(alpha, (k - 1) as f64) * sum, CHAIN_TOL);
    }

    let mut meas = Tally::new("measurement-vs-diamond");
    let mut diamond_tel = Tally::new("diamond-vs-telescope");
    let mut gate = Tally::new("single-gate-telescope");
    for _ in 0..TRIALS {
        let circuit = random_circuit(&mut rng, 3)?;
        let theta = random_theta(&mut rng, circuit.parameter_count());
        let scale = pow(10.0, rng.random_range(-3.0..0.0));
        let theta2: Vec<f64> = theta.iter().map(|t| t + scale * rng.random_range(-1.0..1.0)).collect();
        let x = uniform_ball(&mut rng, circuit.qubits(), 3.0);
        let state = encode(&x, circuit.qubits())?;
        let z = measure_vector(&circuit, &run_circuit(&circuit, &theta, &state)?)?;
        let z2 = measure_vector(&circuit, &run_circuit(&circuit, &theta2, &state)?)?;
        let diamond = diamond_distance_unitary(&circuit.circuit_unitary(&theta)?, &circuit.circuit_unitary(&theta2)?)?;
        let beta = circuit.beta();
        let worst = z.iter().zip(&z2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        meas.bound(worst, beta * diamond, CHAIN_TOL);
        let u = circuit.slot_unitaries(&theta)?;
        let v = circuit.slot_unitaries(&theta2)?;
        diamond_tel.bound(beta * diamond, 2.0 * beta * sum_site_distance(&circuit, &u, &v)?, CHAIN_TOL);

        let a = build_unitary(&random_theta(&mut rng, GENERATOR_COUNT))?;
        let b = build_unitary(&random_theta(&mut rng, GENERATOR_COUNT))?;
        gate.bound(diamond_distance_unitary(&a, &b)?, telescope_bound(&[a], &[b])?, CHAIN_TOL);
    }

    let mut quantum = Tally::new("quantum-perturbation");
    let mut classical = Tally::new("classical-perturbation");
    for _ in 0..TRIALS {
        let circuit = random_circuit(&mut rng, 3)?;
        let k = rng.random_range(1..=3usize);
        let dims = random_dims(&mut rng, circuit.measurement_count(), k);
        let alpha = rng.random_range(0.3..2.0);
        let act = random_activation(&mut rng);
        let (f, g) = random_pair_nets(&mut rng, &dims, alpha, act)?;
        let theta = random_theta(&mut rng, circuit.parameter_count());
        let scale = pow(10.0, rng.random_range(-3.0..0.0));
        let theta2: Vec<f64> = theta.iter().map(|t| t + scale * rng.random_range(-1.0..1.0)).collect();
        let xs = SampleSet::unlabeled((0..8).map(|_| uniform_ball(&mut rng, circuit.qubits(), 3.0)).collect())?;
        let gamma0 = circuit.beta() * sqrt(circuit.measurement_count() as f64);

        let h = HybridModel::new(circuit.clone(), f.clone(), theta.clone())?;
        let h2 = h.with_theta(theta2)?;
        let dist = super::cover::hypothesis_distance(&h, &h2, &xs)?;
        let sum = sum_site_distance(&circuit, &h.slot_unitaries()?, &h2.slot_unitaries()?)?;
        quantum.bound(dist, 2.0 * output_diff_factor(k, 1.0, alpha)? * gamma0 * sum, CHAIN_TOL);

        let h3 = h.with_net(g.clone())?;
        let dist = super::cover::hypothesis_distance(&h, &h3, &xs)?;
        let sum: f64 = f.layers().iter().zip(g.layers()).map(|(a, b)| (a.weights() - b.weights()).norm()).sum();
        classical.bound(dist, gamma0 * pow(alpha, (k - 1) as f64) * sum, CHAIN_TOL);
    }

    Ok(SuiteReport::new(
        "telescope",
        seed,
        vec![
            growth.finish(0, "|a_{i-1}(x)| <= (L alpha)^{i-1} |x|"),
            contraction.finish(0, "|F(z) - F(z')| <= L^{k-1} alpha^k |z - z'|"),
            layers.finish(0, "|f(x) - h(x)| <= R (L alpha)^{k-1} sum |F_i - K_i|_F"),
            meas.finish(0, "|z_j - z'_j| <= beta * diamond distance"),
            diamond_tel.finish(0, "beta * diamond <= 2 beta sum |U_t - V_t|"),
            gate.finish(0, "telescope bound >= exact diamond distance, one gate"),
            quantum.finish(0, "|h - h'|_X <= 2 L^{k-1} alpha^k beta sqrt(n) sum |U_t - V_t|"),
            classical.finish(0, "|h - h'|_X <= beta sqrt(n) (L alpha)^{k-1} sum |F_i - K_i|_F"),
        ],
    ))
}

// ---------------------------------------------------------------- radius

/// `‖z(x)‖ ≤ β√n` and `‖h(x)‖ ≤ L^{k-1} α^k β√n` over 10⁴ random models and
/// inputs, and the same readout bound through the density-matrix path.
pub fn radius_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = stream_rng(seed, 40);
    let mut radius = Tally::new("measurement-radius");
    let mut output = Tally::new("output-radius");
    let mut density = Tally::new("density-radius");
    for i in 0..10_000 {
        let circuit = random_circuit(&mut rng, 4)?;
        let k = rng.random_range(1..=3usize);
        let dims = random_dims(&mut rng, circuit.measurement_count(), k);
        let alpha = rng.random_range(0.3..2.0);
        let fill = rng.random_range(0.05..=1.0);
        let act = random_activation(&mut rng);
        let model = random_model(&mut rng, &circuit, &dims, alpha, act, fill)?;
        let x = uniform_ball(&mut rng, circuit.qubits(), 10.0);
        let z = model.features(&x)?;
        let gamma0 = circuit.beta() * sqrt(circuit.measurement_count() as f64);
        let zn = norm(&z);
        radius.record(zn - gamma0, zn <= gamma0);
        let out = norm(&model.net().forward(&z)?);
        output.bound(out, output_diff_factor(k, 1.0, alpha)? * gamma0, CHAIN_TOL);
        if i % 10 == 0 {
            let rho = run_circuit(&circuit, model.theta(), &encode(&x, circuit.qubits())?)?;
            let zd = norm(&measure_vector(&circuit, &rho)?);
            density.record(zd - gamma0, zd <= gamma0);
        }
    }
    Ok(SuiteReport::new(
        "radius",
        seed,
        vec![
            radius.finish(0, "|z(x)| <= beta sqrt(n), no tolerance"),
            output.finish(0, "|h(x)| <= L^{k-1} alpha^k beta sqrt(n)"),
            density.finish(0, "density-matrix readout, |z(x)| <= beta sqrt(n)"),
        ],
    ))
}

// ---------------------------------------------------------------- rademacher

/// Grid of at most 200 scalar hybrid hypotheses: a lattice over two angles
/// of one slot crossed with a lattice of first-layer weights.
fn hybrid_grid(theta_steps: usize, weight_steps: usize) -> Result<Vec<HybridModel>> {
    let circuit = CircuitSpec::ladder(2, 1, 1, 2)?;
    let angles = linspace(-1.5, 1.5, theta_steps);
    let ws = linspace(-0.7, 0.7, weight_steps);
    let axes = [
        generator_index(Pauli::Y, Pauli::I).expect("non-identity"),
        generator_index(Pauli::I, Pauli::X).expect("non-identity"),
    ];
    let mut out = Vec::new();
    for a in &angles {
        for b in &angles {
            let mut theta = vec![0.0; GENERATOR_COUNT];
            theta[axes[0]] = *a;
            theta[axes[1]] = *b;
            for w1 in &ws {
                for w2 in &ws {
                    let layer = BoundedLayer::new(DMatrix::from_row_slice(1, 2, &[*w1, *w2]), 1.0)?;
                    let net = NetworkStack::new(vec![layer], Activation::Tanh)?;
                    out.push(HybridModel::new(circuit.clone(), net, theta.clone())?);
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustive sign enumeration on constant and singleton classes, and Monte
/// Carlo estimates on hybrid grids against the Dudley bound for 20 seeds.
pub fn rademacher_suite(seed: u64) -> Result<SuiteReport> {
    let mut constants = Tally::new("two-constants");
    let t = HypothesisTable::new(vec![vec![1.0, 1.0], vec![-1.0, -1.0]])?;
    let est = exhaustive_rademacher(&t)?.mean;
    constants.record((est - 0.5).abs(), est == 0.5);

    let mut rng = stream_rng(seed, 50);
    let mut singleton = Tally::new("singleton-zero");
    for _ in 0..20 {
        let n = rng.random_range(1..=12usize);
        let row: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let v = exhaustive_rademacher(&HypothesisTable::new(vec![row])?)?.mean.abs();
        singleton.record(v, v <= 1e-12);
    }

    let mut dudley = Tally::new("hybrid-grid-vs-dudley");
    let grid = hybrid_grid(4, 3)?;
    let loss = LossSpec::clipped_square(1.0, 1)?;
    for s in 0..20u64 {
        let mut r = stream_rng(seed.wrapping_add(s), 51);
        let xs = SampleSet::unlabeled((0..32).map(|_| uniform_ball(&mut r, 2, 3.0)).collect())?;
        let table = HypothesisTable::from_models(&grid, &xs)?;
        let est = monte_carlo_rademacher(&table, 2000, seed.wrapping_add(s))?;
        let params = BoundParams::for_model(&grid[0], &loss, 32, 0.05, None)?;
        let bound = rademacher_bound_hybrid(&params)?.total();
        dudley.bound(est.mean, bound, 0.0);
    }

    Ok(SuiteReport::new(
        "rademacher",
        seed,
        vec![
            constants.finish(0, "{+1, -1} at N = 2, exhaustive signs, exactly 0.5"),
            singleton.finish(0, "singleton classes, N <= 12, |estimate| <= 1e-12"),
            dudley.finish(0, "144-hypothesis hybrid grid, N = 32, estimate <= Dudley bound"),
        ],
    ))
}

// ---------------------------------------------------------------- gap

/// Study with three qubits, four gate slots, a two-layer network with
/// `α = 1` and `N ∈ {50, 100, 200, 400}`.
pub fn reference_gap_experiment(seeds: Vec<u64>) -> Result<GapExperiment> {
    Ok(GapExperiment {
        circuit: CircuitSpec::ladder(3, 4, 1, 3)?,
        layer_dims: vec![3, 3, 1],
        alpha: 1.0,
        activation: Activation::Tanh,
        weight_fill: 1.0,
        loss: LossSpec::clipped_square(4.0, 1)?,
        input_dim: 3,
        input_radius: 3.0,
        noise: 0.3,
        sizes: vec![50, 100, 200, 400],
        test_multiplier: 20,
        training: TrainOptions::new(150, 0.5),
        student: StudentInit::Random,
        delta: 0.05,
        c_conf: None,
        seeds,
    })
}

/// `classical_term / quantum_term` of a single-layer class with `T` slots.
pub fn single_layer_ratio(gates: usize) -> Result<f64> {
    let p = BoundParams {
        gates,
        layers: 1,
        rows: 1,
        cols: 3,
        measurements: 3,
        samples: 100,
        ..BoundParams::default()
    };
    let p = BoundParams {
        radius: p.hybrid_radius(),
        ..p
    };
    let r = rademacher_bound_hybrid(&p)?;
    Ok(r.classical_term / r.quantum_term)
}

/// Checks over finished gap records. `allowance` is the fraction of records
/// allowed above their bound (`δ` in `verify`, zero for acceptance).
pub fn gap_suite(seed: u64, records: &[GapRecord], allowance: f64) -> Result<SuiteReport> {
    let mut below = Tally::new("gap-below-bound");
    for r in records {
        below.bound(r.gap, r.bound.total, 0.0);
    }
    let allowed = (allowance * records.len() as f64) as usize;

    let mut decay = Tally::new("median-gap-decay");
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    for &n in &sizes {
        if sizes.contains(&(4 * n)) {
            let small = median_gap(records, n).expect("size present");
            let large = median_gap(records, 4 * n).expect("size present");
            let ratio = if small > 0.0 { large / small } else { f64::INFINITY };
            decay.record(ratio, large <= GAP_DECAY_RATIO * small);
        }
    }

    let mut ratio = Tally::new("single-layer-ratio");
    for t in [4usize, 8, 16] {
        let r = single_layer_ratio(t)?;
        ratio.record(r, r < SINGLE_LAYER_RATIO);
    }

    let mut diverged = Tally::new("no-divergence");
    for r in records {
        diverged.record(if r.diverged { 1.0 } else { 0.0 }, !r.diverged);
    }

    Ok(SuiteReport::new(
        "gap",
        seed,
        vec![
            below.finish(allowed, "gap <= bound total for every record"),
            decay.finish(0, "median gap at 4N <= 0.6 x median gap at N"),
            ratio.finish(0, "k = 1: classical / quantum < 2 for T in {4, 8, 16}"),
            diverged.finish(allowed, "training stayed finite"),
        ],
    ))
}
