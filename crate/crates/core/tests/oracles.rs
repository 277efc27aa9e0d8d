//! Fixed values checked against independent computations.

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use hybound_core::bounds::*;
use hybound_core::empirical::suites::{dudley_quadrature, gamma_three_halves_quadrature, single_layer_ratio};
use hybound_core::empirical::*;
use hybound_core::hybrid::*;
use hybound_core::net::*;
use hybound_core::qcore::*;
use hybound_core::Error;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn theta_on(a: Pauli, b: Pauli, v: f64) -> Vec<f64> {
    let mut t = vec![0.0; GENERATOR_COUNT];
    t[generator_index(a, b).unwrap()] = v;
    t
}

/// Largest singular value by power iteration on `A†A`.
fn power_iteration(a: &ComplexMatrix) -> f64 {
    let m = a.as_inner();
    let ata = m.adjoint() * m;
    let mut v = DVector::from_fn(m.ncols(), |i, _| c(1.0 + i as f64, 0.5 - i as f64));
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w = &ata * &v;
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        lambda = n;
        v = w / c(n, 0.0);
    }
    lambda.sqrt()
}

#[test]
fn zz_rotation_matches_eigendecomposition() {
    let u = build_unitary(&theta_on(Pauli::Z, Pauli::Z, FRAC_PI_2)).unwrap();
    let d = [c(0.0, -1.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, -1.0)];
    for (i, di) in d.iter().enumerate() {
        for j in 0..4 {
            let want = if i == j { *di } else { c(0.0, 0.0) };
            assert!((u.get(i, j) - want).norm() < 1e-12);
        }
    }
}

#[test]
fn encode_half_turn() {
    let rho = encode(&[FRAC_PI_2], 2).unwrap();
    // qubit 0 is the high bit; second qubit stays in |0>
    assert_abs_diff_eq!(rho.density().get(0, 0).re, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(rho.density().get(2, 2).re, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(rho.density().get(0, 2).re, 0.5, epsilon = 1e-15);
    let spec = CircuitSpec::ladder(2, 1, 1, 1).unwrap();
    let z = measure_vector(&spec, &rho).unwrap();
    assert_abs_diff_eq!(z[0], 0.0, epsilon = 1e-15);
    let one = encode(&[PI], 2).unwrap();
    assert_abs_diff_eq!(measure_vector(&spec, &one).unwrap()[0], -1.0, epsilon = 1e-15);
}

#[test]
fn x_rotation_on_zero_state_matches_matrix_vector() {
    let spec = CircuitSpec::ladder(2, 1, 1, 2).unwrap();
    for angle in [FRAC_PI_2, PI, 0.3] {
        let theta = theta_on(Pauli::X, Pauli::I, angle);
        let out = run_circuit(&spec, &theta, &encode(&[], 2).unwrap()).unwrap();
        let u = build_unitary(&theta).unwrap();
        // column 0 of U is U|00>
        for i in 0..4 {
            for j in 0..4 {
                let want = u.get(i, 0) * u.get(j, 0).conj();
                assert!((out.density().get(i, j) - want).norm() < 1e-12);
            }
        }
    }
    let full = run_circuit(&spec, &theta_on(Pauli::X, Pauli::I, FRAC_PI_2), &encode(&[], 2).unwrap()).unwrap();
    assert_abs_diff_eq!(full.density().get(2, 2).re, 1.0, epsilon = 1e-12);
    let zz = run_circuit(&spec, &theta_on(Pauli::Z, Pauli::Z, FRAC_PI_2), &encode(&[], 2).unwrap()).unwrap();
    assert_abs_diff_eq!(zz.density().get(0, 0).re, 1.0, epsilon = 1e-12);
}

#[test]
fn spectral_norm_matches_power_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let data: Vec<Complex64> = (0..16).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let a = ComplexMatrix::from_row_slice(4, 4, &data).unwrap();
        assert!((spectral_norm(&a) - power_iteration(&a)).abs() < 1e-8);
    }
    assert_abs_diff_eq!(spectral_norm(&ComplexMatrix::identity(4).scale(c(2.0, 0.0))), 2.0, epsilon = 1e-14);
}

#[test]
fn telescope_and_diamond_examples() {
    let i = ComplexMatrix::identity(4);
    let flip = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
    assert_abs_diff_eq!(telescope_bound(std::slice::from_ref(&i), std::slice::from_ref(&flip)).unwrap(), 4.0, epsilon = 1e-12);
    assert_abs_diff_eq!(diamond_distance_unitary(&i, &flip).unwrap(), 2.0, epsilon = 1e-12);
    let phase = i.scale(Complex64::from_polar(1.0, 0.9));
    assert!(diamond_distance_unitary(&i, &phase).unwrap() < 1e-12);
    assert!(matches!(
        telescope_bound(std::slice::from_ref(&i), &[i.clone(), i.clone()]),
        Err(Error::Shape(_))
    ));
}

#[test]
fn network_examples() {
    let id = |n| BoundedLayer::new(DMatrix::identity(n, n), 2.0).unwrap();
    let net = NetworkStack::new(vec![id(2), id(2)], Activation::Relu).unwrap();
    assert_eq!(net.forward(&[-1.0, 2.0]).unwrap(), vec![0.0, 2.0]);
    let single = NetworkStack::new(vec![id(3)], Activation::Tanh).unwrap();
    assert_eq!(single.forward(&[0.3, -4.0, 7.0]).unwrap(), vec![0.3, -4.0, 7.0]);

    let half = BoundedLayer::new(DMatrix::from_row_slice(1, 2, &[0.3, 0.4]), 1.0).unwrap();
    assert_eq!(project_frobenius(&half), half);
    let two = BoundedLayer::new(DMatrix::from_row_slice(2, 1, &[1.2, 1.6]), 1.0).unwrap();
    assert_eq!(project_frobenius(&two).weights(), &DMatrix::from_row_slice(2, 1, &[0.6, 0.8]));

    assert_eq!(output_diff_factor(1, 3.0, 1.0).unwrap(), 1.0);
    assert_eq!(output_diff_factor(2, 1.0, 2.0).unwrap(), 4.0);
    assert!(output_diff_factor(0, 1.0, 1.0).is_err());
}

fn identity_model() -> HybridModel {
    let circuit = CircuitSpec::ladder(2, 1, 1, 1).unwrap();
    let net = NetworkStack::new(vec![BoundedLayer::new(DMatrix::from_element(1, 1, 1.0), 1.0).unwrap()], Activation::Identity).unwrap();
    HybridModel::new(circuit, net, vec![0.0; GENERATOR_COUNT]).unwrap()
}

#[test]
fn predict_examples() {
    let m = identity_model();
    assert_abs_diff_eq!(predict(&m, &[0.0]).unwrap()[0], 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(predict(&m, &[PI]).unwrap()[0], -1.0, epsilon = 1e-15);
}

#[test]
fn loss_and_risk_examples() {
    let l = LossSpec::clipped_square(4.0, 1).unwrap();
    assert_eq!(loss(&l, &[0.5], &[0.5]).unwrap(), 0.0);
    assert_eq!(loss(&l, &[1.0], &[0.0]).unwrap(), 1.0);
    assert_eq!(loss(&l, &[10.0], &[0.0]).unwrap(), 4.0);
    assert!(matches!(loss(&l, &[1.0], &[0.0, 1.0]), Err(Error::Shape(_))));

    let m = identity_model();
    let data = SampleSet::new(vec![vec![0.0], vec![PI]], vec![vec![1.0], vec![0.0]]).unwrap();
    assert_abs_diff_eq!(empirical_risk(&m, &l, &data).unwrap(), 0.5, epsilon = 1e-12);
}

#[test]
fn hypothesis_distance_examples() {
    let m = identity_model();
    let xs = SampleSet::unlabeled(vec![vec![0.0], vec![1.0]]).unwrap();
    assert_eq!(hypothesis_distance(&m, &m, &xs).unwrap(), 0.0);
    // a zero layer outputs 0, leaving the RMS of z = (1, cos 1)
    let zero = m
        .with_net(NetworkStack::new(vec![BoundedLayer::new(DMatrix::from_element(1, 1, 0.0), 1.0).unwrap()], Activation::Identity).unwrap())
        .unwrap();
    let want = ((1.0 + 1f64.cos().powi(2)) / 2.0).sqrt();
    assert_abs_diff_eq!(hypothesis_distance(&m, &zero, &xs).unwrap(), want, epsilon = 1e-14);
    assert!(SampleL2.distance(&vec![vec![1.0], vec![1.0]], &vec![vec![0.0], vec![0.0]]) == 1.0);
}

#[test]
fn entropy_examples() {
    assert_abs_diff_eq!(entropy_l2_ball(1, 1.0, 0.5).unwrap(), 1.7918, epsilon = 1e-4);
    assert_eq!(entropy_l2_ball(3, 2.0, 6.0).unwrap(), 0.0);
    assert_abs_diff_eq!(entropy_fc_layer(2, 3, 1.0, 1.0).unwrap(), 6.5917, epsilon = 1e-4);
    let p = BoundParams::default();
    assert_abs_diff_eq!(entropy_network(&p, 1.0).unwrap(), 1.0986, epsilon = 1e-4);
    assert_abs_diff_eq!(entropy_hybrid(&p, 1.0).unwrap(), 103.49, epsilon = 5e-3);
    assert!(matches!(entropy_two_qubit_unitary(6.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn interval_packing_is_two() {
    let pts: Vec<Vec<f64>> = (0..=4000).map(|i| vec![-1.0 + i as f64 / 2000.0]).collect();
    let space = MetricSpaceSample::new(pts, Euclidean).unwrap();
    let pack = greedy_packing_number(&space, 0.5).unwrap();
    assert_eq!(pack, 2);
    assert!(pack as f64 <= entropy_l2_ball(1, 1.0, 0.5).unwrap().exp());
    let cover = greedy_cover(&space, 0.5).unwrap();
    assert_eq!(cover.len(), 2);
    assert!(cover.verify(&space, 0.5));
}

#[test]
fn one_layer_network_entropy_is_layer_entropy() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let m = rng.random_range(1..5usize);
        let n = rng.random_range(1..5usize);
        let r = rng.random_range(0.1..4.0);
        let alpha = rng.random_range(0.1..3.0);
        let l = rng.random_range(0.5..2.0);
        let eps = r * alpha * rng.random_range(0.01..1.0);
        let a = network_entropy(1, m, n, r, l, alpha, eps).unwrap();
        let b = entropy_fc_layer(m, n, r * alpha, eps).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn dudley_quadrature_anchors() {
    assert_abs_diff_eq!(dudley_quadrature(6.0, 6.0).unwrap(), 6.0 * 0.5 * PI.sqrt(), epsilon = 1e-9);
    assert_abs_diff_eq!(dudley_j(6.0, 6.0).unwrap(), 5.3174, epsilon = 1e-4);
    assert_abs_diff_eq!(gamma_three_halves_quadrature(1.0).unwrap(), 0.50729, epsilon = 1e-5);
    assert_abs_diff_eq!(gamma_three_halves_quadrature(0.0).unwrap(), 0.886_226_925_452_758, epsilon = 1e-12);
}

#[test]
fn classical_term_matches_quadrature() {
    let p = BoundParams {
        gates: 4,
        layers: 2,
        rows: 2,
        cols: 2,
        measurements: 2,
        samples: 100,
        ..BoundParams::default()
    };
    let p = BoundParams { radius: p.hybrid_radius(), ..p };
    let r = rademacher_bound_hybrid(&p).unwrap();
    let q = 12.0 * 8f64.sqrt() / 10.0 * dudley_quadrature(r.intermediate.c, r.intermediate.gamma0).unwrap();
    assert!((r.classical_term - q).abs() <= 1e-6 * q);
}

#[test]
fn qmlm_and_sample_complexity() {
    let b = generalization_bound_qmlm(10, 1, 1000, 0.01).unwrap();
    assert_abs_diff_eq!(b.total, 0.2196, epsilon = 1e-4);
    let reps = generalization_bound_qmlm(10, 1, 1000, 0.01).unwrap();
    let closed = (10.0 * 10f64.ln() / 1000.0).sqrt() + (100f64.ln() / 1000.0).sqrt();
    assert_abs_diff_eq!(reps.total, closed, epsilon = 1e-15);
    assert_abs_diff_eq!(required_samples(0.1, 10).unwrap(), 2302.6, epsilon = 0.05);
}

#[test]
fn quadrupling_n_halves_terms() {
    let p = BoundParams {
        gates: 4,
        layers: 2,
        rows: 2,
        cols: 2,
        samples: 100,
        ..BoundParams::default()
    };
    let q = BoundParams { samples: 400, ..p };
    let (a, b) = (rademacher_bound_hybrid(&p).unwrap(), rademacher_bound_hybrid(&q).unwrap());
    assert_abs_diff_eq!(b.classical_term, a.classical_term / 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(b.quantum_term, a.quantum_term / 2.0, epsilon = 1e-12);
    let (a, b) = (generalization_bound_hybrid(&p).unwrap(), generalization_bound_hybrid(&q).unwrap());
    assert_abs_diff_eq!(b.confidence_term, a.confidence_term / 2.0, epsilon = 1e-12);
    let p = BoundParams { layers: 2, rows: 3, cols: 2, ..p };
    let (a, b) = (generalization_bound_network(&p).unwrap(), generalization_bound_network(&BoundParams { samples: 400, ..p }).unwrap());
    assert_abs_diff_eq!(b, a / 2.0, epsilon = 1e-12);
}

#[test]
fn total_is_definitional_composition() {
    let p = BoundParams {
        gates: 6,
        layers: 2,
        rows: 3,
        cols: 3,
        measurements: 3,
        alpha: 1.3,
        samples: 250,
        loss_lipschitz: 4.0,
        c_conf: 12.0,
        ..BoundParams::default()
    };
    let b = generalization_bound_hybrid(&p).unwrap();
    let r = rademacher_bound_hybrid(&p).unwrap();
    let conf = 12.0 * ((1.0 / 0.05f64).ln() / 250.0).sqrt();
    let want = 2.0 * (4.0 / 3f64.sqrt()) * (r.classical_term + r.quantum_term) + conf;
    assert!((b.total - want).abs() <= 1e-12 * want);
}

#[test]
fn quantum_term_grows_with_gates() {
    let mut last = 0.0;
    for t in 1..40 {
        let p = BoundParams { gates: t, ..BoundParams::default() };
        let q = rademacher_bound_hybrid(&p).unwrap().quantum_term;
        assert!(q > last);
        last = q;
    }
}

#[test]
fn single_layer_ratio_stays_bounded() {
    let ratios: Vec<f64> = [4, 8, 16, 32, 64].iter().map(|&t| single_layer_ratio(t).unwrap()).collect();
    assert!(ratios.iter().all(|&r| r < 2.0), "{ratios:?}");
}

#[test]
fn classical_summand_within_explicit_constants_of_network_bound() {
    // J ≤ C√π/2, so the summand is at most 36√π k^{3/2} √(mn/N) R L^{k-1} α^k γ₀.
    let cap = 36.0 * PI.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let p = BoundParams {
            layers: rng.random_range(1..4usize),
            rows: rng.random_range(1..5usize),
            cols: rng.random_range(1..5usize),
            alpha: rng.random_range(0.5..2.0),
            samples: rng.random_range(10..1000usize),
            delta: 1.0,
            ..BoundParams::default()
        };
        let pipeline = rademacher_bound_hybrid(&p).unwrap().classical_term;
        let formula = generalization_bound_network(&p).unwrap();
        assert!(pipeline <= cap * formula * (1.0 + 1e-12), "{pipeline} vs {formula}");
        assert!(pipeline > 0.0);
    }
}

#[test]
fn rademacher_examples() {
    let t = HypothesisTable::new(vec![vec![0.0; 4]]).unwrap();
    assert_eq!(monte_carlo_rademacher(&t, 50, 1).unwrap().mean, 0.0);
    let t = HypothesisTable::new(vec![vec![1.0, 1.0], vec![-1.0, -1.0]]).unwrap();
    assert_eq!(exhaustive_rademacher(&t).unwrap().mean, 0.5);
}
