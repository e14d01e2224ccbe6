//! Special functions consumed by the spectral series.

mod bessel;
mod gamma;
mod gegenbauer;
pub mod quadrature;
pub mod sum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{bessel_j, bessel_j_estimate, ln_power_bound, BesselValue};
pub(crate) use gamma::log_gamma_unchecked;
pub use gamma::{ln_gegenbauer_at_one, log_gamma};
pub use gegenbauer::{gegenbauer_c, gegenbauer_sequence, MAX_GEGENBAUER_D};

/// Accuracy request for special-function evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    abs_tol: f64,
    rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "tolerances must be positive, got abs={abs_tol}, rel={rel_tol}"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// Admissible absolute error for a result of magnitude `value`.
    pub fn allowed(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// `cos⁻¹(μ)` on `[-1, 1]`, using `2 asin(√((1-μ)/2))` above 1/2.
pub fn acos_stable(mu: f64) -> f64 {
    if mu > 0.5 {
        2.0 * (0.5 * (1.0 - mu)).sqrt().asin()
    } else {
        mu.acos()
    }
}

/// Phase profile `h₁(μ) = √(1-μ²) - μ cos⁻¹(μ)` on `[0, 1]`.
pub fn h1(mu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Domain(format!("h1 requires 0 <= mu <= 1, got {mu}")));
    }
    let theta = acos_stable(mu);
    if theta < 0.5 {
        // sin θ - θ cos θ = Σ_{k>=1} (-1)^{k+1} 2k θ^{2k+1} / (2k+1)!
        let t2 = theta * theta;
        let mut term = theta * t2 / 6.0; // θ^3/3!
        let mut sum = 0.0_f64;
        let mut k = 1.0;
        while term.abs() > 1e-18 * sum.abs() || sum == 0.0 {
            sum += 2.0 * k * term;
            term *= -t2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            k += 1.0;
            if term == 0.0 {
                break;
            }
        }
        Ok(sum)
    } else {
        Ok(((1.0 - mu) * (1.0 + mu)).sqrt() - mu * theta)
    }
}

/// `h₁′(μ) = -cos⁻¹(μ)`.
pub fn h1_derivative(mu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Domain(format!("h1 requires 0 <= mu <= 1, got {mu}")));
    }
    Ok(-acos_stable(mu))
}
