use alloc::collections::BinaryHeap;
use alloc::format;
use core::cmp::Ordering;

use crate::{Error, Result};

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1]; only the non-negative half
// is stored, index 0 is the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];
// Gauss weights for the nodes XGK[0], XGK[2], XGK[4], XGK[6].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

const MAX_INTERVALS: usize = 4000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[0] * fc;
    let mut g = WG[0] * fc;
    for i in 1..8 {
        let d = h * XGK[i];
        let s = f(c - d) + f(c + d);
        k += WGK[i] * s;
        if i % 2 == 0 {
            g += WG[i / 2] * s;
        }
    }
    Piece {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

/// Globally adaptive G7/K15 quadrature of `f` over `[a, b]`. Bisects the
/// interval with the largest error estimate until the summed estimate falls
/// below `max(abs_tol, rel_tol·|value|)`.
///
/// Nodes are interior, so integrable endpoint singularities are fine.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::param("interval", format!("need finite a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Domain(format!(
                "quadrature did not converge: error estimate {error:e} after {MAX_INTERVALS} intervals"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if !value.is_finite() {
            return Err(Error::Domain("integrand produced a non-finite value".into()));
        }
    }
    // re-sum to shed the drift of the running updates
    let (value, error_estimate) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(Quadrature {
        value,
        error_estimate,
        intervals: heap.len(),
    })
}

/// `∫_a^∞ f`, through `t = a + u/(1-u)` on `u ∈ [0, 1)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    integrate(
        |u| {
            let w = 1.0 - u;
            let v = f(a + u / w) / (w * w);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{exp, sqrt};

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14, 0.0).unwrap();
        assert!((q.value - 0.0).abs() < 1e-14);
        let q = integrate(|x| x * x, -1.0, 2.0, 1e-14, 0.0).unwrap();
        assert!((q.value - 3.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫₀¹ 1/√x = 2
        let q = integrate(|x| 1.0 / sqrt(x), 0.0, 1.0, 1e-10, 1e-12).unwrap();
        assert!((q.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite() {
        let q = integrate_to_infinity(|t| exp(-t), 0.0, 1e-12, 1e-12).unwrap();
        assert!((q.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn bad_interval() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-8, 0.0).is_err());
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-8, 0.0).unwrap().value, 0.0);
    }
}
