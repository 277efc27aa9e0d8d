//! Distances between unitary channels.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::circuit::UNITARY_TOL;
use super::matrix::{spectral_norm, ComplexMatrix};
use crate::math::sin;
use crate::{Error, Result};

/// `2 Σ_k ‖U_k − V_k‖` in spectral norm; upper-bounds the diamond distance
/// between the channels of the products `U_T⋯U_1` and `V_T⋯V_1`.
pub fn telescope_bound(us: &[ComplexMatrix], vs: &[ComplexMatrix]) -> Result<f64> {
    if us.len() != vs.len() {
        return Err(Error::Shape(format!(
            "gate lists differ in length: {} vs {}",
            us.len(),
            vs.len()
        )));
    }
    let mut sum = 0.0;
    for (u, v) in us.iter().zip(vs) {
        if u.rows() != v.rows() || u.cols() != v.cols() {
            return Err(Error::Shape(format!(
                "gate shapes differ: {}x{} vs {}x{}",
                u.rows(),
                u.cols(),
                v.rows(),
                v.cols()
            )));
        }
        sum += spectral_norm(&(u - v));
    }
    Ok(2.0 * sum)
}

/// Eigenvalues of a square complex matrix from its complex Schur form.
fn schur_eigenvalues(m: &ComplexMatrix) -> Vec<num_complex::Complex64> {
    let (_, t) = m.as_inner().clone().schur().unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Exact diamond distance `‖U·U† − V·V†‖⋄ = 2√(1 − ν²)` between two unitary
/// channels, where `ν` is the distance from the origin to the convex hull of
/// the spectrum of `U†V`.
///
/// The spectrum lies on the unit circle, so the hull contains the origin
/// exactly when the eigenphases do not fit in an open half circle; otherwise
/// the nearest hull point sits on the chord spanning the occupied arc of
/// width `w`, giving `ν = cos(w/2)` and a distance of `2 sin(w/2)`.
pub fn diamond_distance_unitary(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.rows() != v.rows() || u.cols() != v.cols() || !u.is_square() {
        return Err(Error::Shape(format!(
            "diamond distance needs equal square matrices, got {}x{} and {}x{}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    for (name, m) in [("U", u), ("V", v)] {
        let defect = m.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::Contract(format!("{name} is not unitary (defect {defect:e})")));
        }
    }
    let w = u.adjoint().try_mul(v)?;
    let mut phases: Vec<f64> = schur_eigenvalues(&w).iter().map(|z| z.arg()).collect();
    phases.sort_by(f64::total_cmp);
    let mut largest_gap = phases[0] + 2.0 * PI - phases[phases.len() - 1];
    for pair in phases.windows(2) {
        largest_gap = largest_gap.max(pair[1] - pair[0]);
    }
    let arc = 2.0 * PI - largest_gap;
    if arc >= PI {
        Ok(2.0)
    } else {
        Ok(2.0 * sin(arc / 2.0).max(0.0))
    }
}
