//! Pauli products and the SU(4) generator parametrization of 2-qubit gates.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Number of non-identity two-qubit Pauli products.
pub const GENERATOR_COUNT: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Row-major 2x2 entries.
    pub fn entries(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[one, o], [o, one]],
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        let e = self.entries();
        ComplexMatrix::from_inner_unchecked(nalgebra::DMatrix::from_fn(2, 2, |r, c| e[r][c]))
    }
}

/// The 15 generators `P ⊗ Q` with `(P, Q) ≠ (I, I)`, ordered with the first
/// factor major: `I⊗X, I⊗Y, I⊗Z, X⊗I, X⊗X, …, Z⊗Z`.
pub fn generator_labels() -> [(Pauli, Pauli); GENERATOR_COUNT] {
    let mut out = [(Pauli::I, Pauli::I); GENERATOR_COUNT];
    let mut slot = 0;
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            if a == Pauli::I && b == Pauli::I {
                continue;
            }
            out[slot] = (a, b);
            slot += 1;
        }
    }
    out
}

/// Index of `a ⊗ b` in [`generator_labels`]; `None` for `I ⊗ I`.
pub fn generator_index(a: Pauli, b: Pauli) -> Option<usize> {
    let pos = |p: Pauli| Pauli::ALL.iter().position(|&q| q == p).unwrap_or(0);
    (4 * pos(a) + pos(b)).checked_sub(1)
}

pub fn pauli_product(a: Pauli, b: Pauli) -> ComplexMatrix {
    a.matrix().kron(&b.matrix())
}

/// `U(θ) = exp(-i Σ_j θ_j P_j)` over the 15 generators of [`generator_labels`].
pub fn build_unitary(theta: &[f64]) -> Result<ComplexMatrix> {
    if theta.len() != GENERATOR_COUNT {
        return Err(Error::Shape(format!(
            "expected {GENERATOR_COUNT} generator angles, got {}",
            theta.len()
        )));
    }
    if let Some(bad) = theta.iter().position(|t| !t.is_finite()) {
        return Err(Error::param("theta", format!("angle {bad} is not finite")));
    }
    let mut entries = [Complex64::new(0.0, 0.0); 16];
    for (&angle, (a, b)) in theta.iter().zip(generator_labels()) {
        if angle == 0.0 {
            continue;
        }
        let pa = a.entries();
        let pb = b.entries();
        for r in 0..4 {
            for c in 0..4 {
                entries[4 * r + c] += pa[r / 2][c / 2] * pb[r % 2][c % 2] * angle;
            }
        }
    }
    let generator = ComplexMatrix::from_inner_unchecked(nalgebra::DMatrix::from_row_slice(4, 4, &entries));
    generator.exp_neg_i_hermitian()
}

/// A parametrized 2-qubit unitary acting on an ordered pair of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitGate {
    pub theta: [f64; GENERATOR_COUNT],
    /// `(first, second)`; `first` is the more significant factor of the 4x4 block.
    pub targets: (usize, usize),
}

impl TwoQubitGate {
    pub fn new(theta: [f64; GENERATOR_COUNT], targets: (usize, usize), qubits: usize) -> Result<Self> {
        check_targets(targets, qubits)?;
        Ok(Self { theta, targets })
    }

    pub fn unitary(&self) -> Result<ComplexMatrix> {
        build_unitary(&self.theta)
    }
}

pub(crate) fn check_targets(targets: (usize, usize), qubits: usize) -> Result<()> {
    let (a, b) = targets;
    if a == b {
        return Err(Error::Shape(format!("gate targets must differ, got ({a}, {b})")));
    }
    if a >= qubits || b >= qubits {
        return Err(Error::Shape(format!(
            "gate targets ({a}, {b}) outside a {qubits}-qubit register"
        )));
    }
    Ok(())
}

/// All 15 generator matrices, in [`generator_labels`] order.
pub fn generators() -> Vec<ComplexMatrix> {
    generator_labels().iter().map(|&(a, b)| pauli_product(a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin};
    use core::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).as_inner().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_angles_give_identity() {
        let u = build_unitary(&[0.0; 15]).unwrap();
        assert!(max_diff(&u, &ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn single_generator_rotation() {
        let theta_val = 0.37;
        let mut theta = [0.0; 15];
        let x_i = generator_index(Pauli::X, Pauli::I).unwrap();
        theta[x_i] = theta_val;
        let u = build_unitary(&theta).unwrap();
        let expected = &ComplexMatrix::identity(4).scale(c(cos(theta_val), 0.0))
            - &pauli_product(Pauli::X, Pauli::I).scale(c(0.0, sin(theta_val)));
        assert!(max_diff(&u, &expected) < 1e-13);
    }

    #[test]
    fn zz_quarter_turn_is_diagonal_phase() {
        let mut theta = [0.0; 15];
        theta[generator_index(Pauli::Z, Pauli::Z).unwrap()] = FRAC_PI_2;
        let u = build_unitary(&theta).unwrap();
        // ZZ = diag(1,-1,-1,1), so exp(-i π/2 ZZ) = diag(-i, i, i, -i)
        let expected = ComplexMatrix::diagonal(&[c(0.0, -1.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, -1.0)]);
        assert!(max_diff(&u, &expected) < 1e-13);
    }

    #[test]
    fn generator_table_is_complete_and_ordered() {
        let labels = generator_labels();
        assert_eq!(labels[0], (Pauli::I, Pauli::X));
        assert_eq!(labels[3], (Pauli::X, Pauli::I));
        assert_eq!(labels[14], (Pauli::Z, Pauli::Z));
        assert_eq!(generator_index(Pauli::I, Pauli::I), None);
        for (i, &(a, b)) in labels.iter().enumerate() {
            assert_eq!(generator_index(a, b), Some(i));
        }
    }

    #[test]
    fn rejects_bad_angles() {
        let mut theta = [0.0; 15];
        theta[4] = f64::INFINITY;
        assert!(matches!(build_unitary(&theta), Err(Error::Parameter { .. })));
        assert!(matches!(build_unitary(&[0.0; 3]), Err(Error::Shape(_))));
    }

    #[test]
    fn gate_targets_validated() {
        assert!(TwoQubitGate::new([0.0; 15], (1, 1), 3).is_err());
        assert!(TwoQubitGate::new([0.0; 15], (0, 3), 3).is_err());
        assert!(TwoQubitGate::new([0.0; 15], (2, 0), 3).is_ok());
    }
}
