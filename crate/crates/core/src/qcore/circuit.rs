//! Circuits of local 2-qubit gates on a dense register.
//!
//! Qubit 0 is the most significant tensor factor: basis index bit
//! `q - 1 - i` carries qubit `i`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::pauli::{build_unitary, check_targets, TwoQubitGate, GENERATOR_COUNT};
use crate::math::{cos, sin};
use crate::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 10;

/// Unitarity tolerance for gates and channels.
pub const UNITARY_TOL: f64 = 1e-10;
/// Hermiticity and trace tolerance for states.
pub const STATE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a density matrix.
pub const PSD_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    /// `⊗_i RY(x_i)|0⟩`, remaining qubits left in `|0⟩`.
    #[default]
    AngleRy,
}

/// A Hermitian observable on one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    qubit: usize,
    entries: [[Complex64; 2]; 2],
}

impl Observable {
    pub fn new(qubit: usize, entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let defect = (entries[0][1] - entries[1][0].conj())
            .norm()
            .max(entries[0][0].im.abs())
            .max(entries[1][1].im.abs());
        if defect > 1e-12 {
            return Err(Error::Contract(format!(
                "observable on qubit {qubit} is not Hermitian (defect {defect:e})"
            )));
        }
        Ok(Self { qubit, entries })
    }

    pub fn pauli_z(qubit: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            qubit,
            entries: [[one, ZERO], [ZERO, -one]],
        }
    }

    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.entries
    }

    /// Operator norm of the 2x2 block.
    pub fn norm(&self) -> f64 {
        let m = ComplexMatrix::from_inner_unchecked(DMatrix::from_fn(2, 2, |r, c| self.entries[r][c]));
        m.spectral_norm()
    }
}

/// One application of a parameter slot to a pair of qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateSite {
    pub targets: (usize, usize),
    pub slot: usize,
}

/// Circuit architecture: gate sites sharing `slots` independent parameter
/// blocks of 15 angles each.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    qubits: usize,
    slots: usize,
    sites: Vec<GateSite>,
    max_repetitions: usize,
    encoding: Encoding,
    measurements: Vec<Observable>,
}

impl CircuitSpec {
    pub fn new(
        qubits: usize,
        slots: usize,
        sites: Vec<GateSite>,
        max_repetitions: usize,
        measurements: Vec<Observable>,
    ) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&qubits) {
            return Err(Error::param(
                "qubits",
                format!("register width must be in 2..={MAX_QUBITS}, got {qubits}"),
            ));
        }
        if slots == 0 {
            return Err(Error::param("slots", "at least one parameter slot is required"));
        }
        if max_repetitions == 0 {
            return Err(Error::param("max_repetitions", "must be at least 1"));
        }
        let mut uses = vec![0usize; slots];
        for site in &sites {
            check_targets(site.targets, qubits)?;
            let count = uses
                .get_mut(site.slot)
                .ok_or_else(|| Error::Shape(format!("slot {} out of range 0..{slots}", site.slot)))?;
            *count += 1;
        }
        if let Some(slot) = uses.iter().position(|&u| u > max_repetitions) {
            return Err(Error::param(
                "max_repetitions",
                format!("slot {slot} used {} times, limit {max_repetitions}", uses[slot]),
            ));
        }
        if measurements.is_empty() || measurements.len() > qubits {
            return Err(Error::param(
                "measurements",
                format!("need 1..={qubits} observables, got {}", measurements.len()),
            ));
        }
        if let Some(m) = measurements.iter().find(|m| m.qubit >= qubits) {
            return Err(Error::Shape(format!("observable on qubit {} outside register", m.qubit)));
        }
        Ok(Self {
            qubits,
            slots,
            sites,
            max_repetitions,
            encoding: Encoding::AngleRy,
            measurements,
        })
    }

    /// `slots` gates on the nearest-neighbour pairs `(0,1), (1,2), …` cycled
    /// through the register, the whole sequence applied `repetitions` times,
    /// with Pauli-Z read out on the first `measurements` qubits.
    pub fn ladder(qubits: usize, slots: usize, repetitions: usize, measurements: usize) -> Result<Self> {
        if qubits < 2 {
            return Err(Error::param("qubits", "ladder needs at least 2 qubits"));
        }
        let mut sites = Vec::with_capacity(slots * repetitions);
        for _ in 0..repetitions {
            for slot in 0..slots {
                let first = slot % (qubits - 1);
                sites.push(GateSite {
                    targets: (first, first + 1),
                    slot,
                });
            }
        }
        let obs = (0..measurements).map(Observable::pauli_z).collect();
        Self::new(qubits, slots, sites, repetitions.max(1), obs)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    /// Number of independent parameter slots (`T`).
    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn sites(&self) -> &[GateSite] {
        &self.sites
    }

    pub fn max_repetitions(&self) -> usize {
        self.max_repetitions
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn measurements(&self) -> &[Observable] {
        &self.measurements
    }

    /// Number of measured observables (`n`).
    pub fn measurement_count(&self) -> usize {
        self.measurements.len()
    }

    /// Largest observable norm (`β`).
    pub fn beta(&self) -> f64 {
        self.measurements.iter().map(Observable::norm).fold(0.0, f64::max)
    }

    pub fn parameter_count(&self) -> usize {
        self.slots * GENERATOR_COUNT
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.parameter_count() {
            return Err(Error::Shape(format!(
                "{} slots need {} angles, got {}",
                self.slots,
                self.parameter_count(),
                theta.len()
            )));
        }
        Ok(())
    }

    /// One unitary per parameter slot.
    pub fn slot_unitaries(&self, theta: &[f64]) -> Result<Vec<ComplexMatrix>> {
        self.check_theta(theta)?;
        theta.chunks_exact(GENERATOR_COUNT).map(build_unitary).collect()
    }

    /// The gate applied at every site, in circuit order.
    pub fn gates(&self, theta: &[f64]) -> Result<Vec<TwoQubitGate>> {
        self.check_theta(theta)?;
        Ok(self
            .sites
            .iter()
            .map(|site| {
                let mut block = [0.0; GENERATOR_COUNT];
                block.copy_from_slice(&theta[site.slot * GENERATOR_COUNT..(site.slot + 1) * GENERATOR_COUNT]);
                TwoQubitGate {
                    theta: block,
                    targets: site.targets,
                }
            })
            .collect())
    }

    /// Unitary at every site, in circuit order, from per-slot unitaries.
    pub fn site_unitaries<'a>(&self, slot_unitaries: &'a [ComplexMatrix]) -> Vec<&'a ComplexMatrix> {
        self.sites.iter().map(|s| &slot_unitaries[s.slot]).collect()
    }

    /// Full `2^q × 2^q` circuit unitary.
    pub fn circuit_unitary(&self, theta: &[f64]) -> Result<ComplexMatrix> {
        let slot_u = self.slot_unitaries(theta)?;
        let d = self.dim();
        let mut cols = DMatrix::<Complex64>::identity(d, d);
        for site in &self.sites {
            for c in 0..d {
                let mut col: Vec<Complex64> = cols.column(c).iter().copied().collect();
                apply_local(&mut col, self.qubits, site.targets, &slot_u[site.slot]);
                for (r, v) in col.into_iter().enumerate() {
                    cols[(r, c)] = v;
                }
            }
        }
        Ok(ComplexMatrix::from_inner_unchecked(cols))
    }

    /// Measurement vector of a pure state.
    pub fn expectations_pure(&self, amplitudes: &[Complex64]) -> Vec<f64> {
        self.measurements
            .iter()
            .map(|m| {
                let e = m.entries;
                let bit = 1 << (self.qubits - 1 - m.qubit);
                let mut acc = 0.0;
                for i in 0..amplitudes.len() {
                    if i & bit != 0 {
                        continue;
                    }
                    let a0 = amplitudes[i];
                    let a1 = amplitudes[i | bit];
                    let w0 = e[0][0] * a0 + e[0][1] * a1;
                    let w1 = e[1][0] * a0 + e[1][1] * a1;
                    acc += (a0.conj() * w0 + a1.conj() * w1).re;
                }
                acc
            })
            .collect()
    }

    /// `z(x)` through a pure-state simulation with precomputed slot unitaries.
    /// Equal to `measure_vector(run_circuit(encode(x)))`.
    pub fn features(&self, slot_unitaries: &[ComplexMatrix], x: &[f64]) -> Result<Vec<f64>> {
        let mut psi = encode_amplitudes(x, self.qubits)?;
        for site in &self.sites {
            apply_local(&mut psi, self.qubits, site.targets, &slot_unitaries[site.slot]);
        }
        Ok(self.expectations_pure(&psi))
    }
}

/// Applies a 4x4 `u` on qubits `targets` to a state vector in place.
pub(crate) fn apply_local(psi: &mut [Complex64], qubits: usize, targets: (usize, usize), u: &ComplexMatrix) {
    let ba = 1usize << (qubits - 1 - targets.0);
    let bb = 1usize << (qubits - 1 - targets.1);
    let m = u.as_inner();
    for base in 0..psi.len() {
        if base & (ba | bb) != 0 {
            continue;
        }
        let idx = [base, base | bb, base | ba, base | ba | bb];
        let v = [psi[idx[0]], psi[idx[1]], psi[idx[2]], psi[idx[3]]];
        for (r, &i) in idx.iter().enumerate() {
            psi[i] = m[(r, 0)] * v[0] + m[(r, 1)] * v[1] + m[(r, 2)] * v[2] + m[(r, 3)] * v[3];
        }
    }
}

/// A density matrix on `q` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    qubits: usize,
    density: ComplexMatrix,
}

impl QuantumState {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(qubits: usize, density: ComplexMatrix) -> Result<Self> {
        let d = 1usize << qubits;
        if density.rows() != d || density.cols() != d {
            return Err(Error::Shape(format!(
                "{qubits} qubits need a {d}x{d} density, got {}x{}",
                density.rows(),
                density.cols()
            )));
        }
        let state = Self { qubits, density };
        state.validate()?;
        Ok(state)
    }

    pub fn pure(qubits: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let d = 1usize << qubits;
        if amplitudes.len() != d {
            return Err(Error::Shape(format!("{qubits} qubits need {d} amplitudes")));
        }
        let rho = DMatrix::from_fn(d, d, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::new(qubits, ComplexMatrix::new(rho)?)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.density.hermiticity_defect();
        if herm > STATE_TOL {
            return Err(Error::Contract(format!("density not Hermitian (defect {herm:e})")));
        }
        let tr = self.density.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::Contract(format!("density trace {tr} differs from 1")));
        }
        let min_eig = self.density.hermitian_eigenvalues()?[0];
        if min_eig < -PSD_TOL {
            return Err(Error::Contract(format!("density has eigenvalue {min_eig:e}")));
        }
        Ok(())
    }
}

fn encode_amplitudes(x: &[f64], qubits: usize) -> Result<Vec<Complex64>> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::param("qubits", format!("must be in 1..={MAX_QUBITS}")));
    }
    if x.len() > qubits {
        return Err(Error::Shape(format!(
            "{} features cannot be encoded on {qubits} qubits",
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("x", "non-finite feature"));
    }
    let mut psi = vec![Complex64::new(1.0, 0.0)];
    for q in 0..qubits {
        let angle = x.get(q).copied().unwrap_or(0.0);
        let (c, s) = (cos(angle / 2.0), sin(angle / 2.0));
        let mut next = Vec::with_capacity(psi.len() * 2);
        for a in &psi {
            next.push(a * c);
            next.push(a * s);
        }
        psi = next;
    }
    Ok(psi)
}

/// Angle encoding `⊗_i RY(x_i)|0⟩` as a density matrix.
pub fn encode(x: &[f64], qubits: usize) -> Result<QuantumState> {
    let psi = encode_amplitudes(x, qubits)?;
    QuantumState::pure(qubits, &psi)
}

/// Applies every gate of the circuit, `ρ ↦ G ρ G†`, in order.
pub fn run_circuit(spec: &CircuitSpec, theta: &[f64], state: &QuantumState) -> Result<QuantumState> {
    if state.qubits != spec.qubits {
        return Err(Error::Shape(format!(
            "state has {} qubits, circuit {}",
            state.qubits, spec.qubits
        )));
    }
    let slot_u = spec.slot_unitaries(theta)?;
    let d = spec.dim();
    let mut rho = state.density.as_inner().clone();
    let mut buf = vec![ZERO; d];
    for site in &spec.sites {
        let u = &slot_u[site.slot];
        // columns: ρ ← G ρ
        for c in 0..d {
            for r in 0..d {
                buf[r] = rho[(r, c)];
            }
            apply_local(&mut buf, spec.qubits, site.targets, u);
            for r in 0..d {
                rho[(r, c)] = buf[r];
            }
        }
        // rows: ρ ← ρ G†, i.e. conj(row) ← G conj(row)
        for r in 0..d {
            for c in 0..d {
                buf[c] = rho[(r, c)].conj();
            }
            apply_local(&mut buf, spec.qubits, site.targets, u);
            for c in 0..d {
                rho[(r, c)] = buf[c].conj();
            }
        }
    }
    QuantumState::new(spec.qubits, ComplexMatrix::new(rho)?)
}

/// Applies an explicit gate list (each gate carries its own angles).
pub fn run_gates(qubits: usize, gates: &[TwoQubitGate], state: &QuantumState) -> Result<QuantumState> {
    let sites = gates
        .iter()
        .enumerate()
        .map(|(slot, g)| GateSite {
            targets: g.targets,
            slot,
        })
        .collect();
    let spec = CircuitSpec::new(qubits, gates.len().max(1), sites, 1, vec![Observable::pauli_z(0)])?;
    let mut theta = Vec::with_capacity(spec.parameter_count());
    for g in gates {
        theta.extend_from_slice(&g.theta);
    }
    if gates.is_empty() {
        theta.resize(GENERATOR_COUNT, 0.0);
    }
    run_circuit(&spec, &theta, state)
}

/// `z_j = tr(M_j ρ)` for every observable of the circuit.
pub fn measure_vector(spec: &CircuitSpec, state: &QuantumState) -> Result<Vec<f64>> {
    if state.qubits != spec.qubits {
        return Err(Error::Shape(format!(
            "state has {} qubits, circuit {}",
            state.qubits, spec.qubits
        )));
    }
    let rho = state.density.as_inner();
    let d = spec.dim();
    spec.measurements
        .iter()
        .map(|m| {
            let e = m.entries;
            let bit = 1 << (spec.qubits - 1 - m.qubit);
            let mut acc = ZERO;
            for i in 0..d {
                if i & bit != 0 {
                    continue;
                }
                let idx = [i, i | bit];
                for s in 0..2 {
                    for t in 0..2 {
                        acc += e[s][t] * rho[(idx[t], idx[s])];
                    }
                }
            }
            Ok(acc.re)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::pauli::{generator_index, Pauli};
    use core::f64::consts::{FRAC_PI_2, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn encode_zero_and_pi() {
        let s = encode(&[0.0, 0.0], 2).unwrap();
        assert!(close(s.density().get(0, 0).re, 1.0, 1e-15));
        let s = encode(&[PI], 1).unwrap();
        assert!(close(s.density().get(1, 1).re, 1.0, 1e-15));
        assert!(s.density().get(0, 0).norm() < 1e-15);
    }

    #[test]
    fn encode_half_turn_diagonal() {
        let s = encode(&[FRAC_PI_2], 1).unwrap();
        assert!(close(s.density().get(0, 0).re, 0.5, 1e-15));
        assert!(close(s.density().get(1, 1).re, 0.5, 1e-15));
        assert!(close(s.density().get(0, 1).re, 0.5, 1e-15));
    }

    #[test]
    fn encode_rejects_wide_input() {
        assert!(matches!(encode(&[0.1, 0.2, 0.3], 2), Err(Error::Shape(_))));
    }

    #[test]
    fn z_readouts() {
        let spec = CircuitSpec::ladder(2, 1, 1, 1).unwrap();
        let z = |x: f64| measure_vector(&spec, &encode(&[x], 2).unwrap()).unwrap()[0];
        assert!(close(z(0.0), 1.0, 1e-15));
        assert!(close(z(PI), -1.0, 1e-15));
        assert!(close(z(FRAC_PI_2), 0.0, 1e-15));
    }

    #[test]
    fn identity_gates_leave_state() {
        let spec = CircuitSpec::ladder(3, 3, 1, 2).unwrap();
        let s = encode(&[0.3, -1.2, 2.0], 3).unwrap();
        let out = run_circuit(&spec, &vec![0.0; spec.parameter_count()], &s).unwrap();
        let diff = (out.density() - s.density()).frobenius_norm();
        assert!(diff < 1e-14);
    }

    #[test]
    fn diagonal_gate_keeps_populations() {
        let spec = CircuitSpec::ladder(2, 1, 1, 2).unwrap();
        let mut theta = vec![0.0; 15];
        theta[generator_index(Pauli::Z, Pauli::Z).unwrap()] = FRAC_PI_2;
        let s = encode(&[0.0, 0.0], 2).unwrap();
        let out = run_circuit(&spec, &theta, &s).unwrap();
        assert!(close(out.density().get(0, 0).re, 1.0, 1e-14));
    }

    #[test]
    fn x_rotation_transfers_population() {
        // exp(-i π/2 X⊗I)|00⟩ = -i|10⟩
        let spec = CircuitSpec::ladder(2, 1, 1, 2).unwrap();
        let mut theta = vec![0.0; 15];
        theta[generator_index(Pauli::X, Pauli::I).unwrap()] = FRAC_PI_2;
        let s = encode(&[0.0, 0.0], 2).unwrap();
        let out = run_circuit(&spec, &theta, &s).unwrap();
        assert!(close(out.density().get(2, 2).re, 1.0, 1e-14));
        let z = measure_vector(&spec, &out).unwrap();
        assert!(close(z[0], -1.0, 1e-14) && close(z[1], 1.0, 1e-14));
    }

    #[test]
    fn spec_validation() {
        assert!(CircuitSpec::ladder(11, 1, 1, 1).is_err());
        assert!(CircuitSpec::ladder(3, 2, 1, 4).is_err());
        let sites = vec![GateSite { targets: (0, 1), slot: 0 }, GateSite { targets: (1, 2), slot: 0 }];
        let obs = vec![Observable::pauli_z(0)];
        assert!(CircuitSpec::new(3, 1, sites.clone(), 1, obs.clone()).is_err());
        assert!(CircuitSpec::new(3, 1, sites, 2, obs).is_ok());
        let one = Complex64::new(1.0, 0.0);
        assert!(matches!(
            Observable::new(0, [[ZERO, one], [ZERO, ZERO]]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn theta_length_checked() {
        let spec = CircuitSpec::ladder(2, 2, 1, 1).unwrap();
        let s = encode(&[0.0], 2).unwrap();
        assert!(matches!(run_circuit(&spec, &[0.0; 15], &s), Err(Error::Shape(_))));
    }
}
