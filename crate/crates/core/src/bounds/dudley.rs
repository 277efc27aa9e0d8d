use alloc::format;

use crate::math::{erfc, exp, log, sqrt, SQRT_PI};
use crate::{Error, Result};

/// Upper incomplete gamma function at `s = 3/2`:
/// `Γ(3/2, x) = (√π/2) erfc(√x) + √x e^{-x}` for `x ≥ 0`.
pub fn upper_gamma_three_halves(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::param("x", format!("must be finite and non-negative, got {x}")));
    }
    let r = sqrt(x);
    Ok(0.5 * SQRT_PI * erfc(r) + r * exp(-x))
}

/// `J = ∫₀^{γ₀} √(max(0, log(C/ε))) dε`.
///
/// For `γ₀ ≤ C` the substitution `u = log(C/ε)` gives `C·Γ(3/2, log(C/γ₀))`;
/// past `ε = C` the integrand vanishes, so larger `γ₀` return `C√π/2`.
pub fn dudley_j(c: f64, gamma0: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("C", format!("must be positive, got {c}")));
    }
    if !(gamma0 > 0.0 && gamma0.is_finite()) {
        return Err(Error::param("gamma0", format!("must be positive, got {gamma0}")));
    }
    let u = log(c / gamma0).max(0.0);
    let r = sqrt(u);
    Ok(0.5 * SQRT_PI * c * erfc(r) + gamma0.min(c) * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_gamma_at_zero() {
        assert!((upper_gamma_three_halves(0.0).unwrap() - 0.886_226_925_452_758).abs() < 1e-15);
    }

    #[test]
    fn gamma_at_one() {
        // √π/2 · erfc(1) + e^{-1}
        assert!((upper_gamma_three_halves(1.0).unwrap() - 0.50729).abs() < 1e-5);
    }

    #[test]
    fn j_anchor_and_saturation() {
        assert!((dudley_j(6.0, 6.0).unwrap() - 5.3174).abs() < 1e-4);
        assert_eq!(dudley_j(6.0, 100.0).unwrap(), dudley_j(6.0, 6.0).unwrap());
        assert!(dudley_j(0.0, 1.0).is_err());
        assert!(dudley_j(1.0, -1.0).is_err());
        assert!(upper_gamma_three_halves(-0.1).is_err());
    }
}
