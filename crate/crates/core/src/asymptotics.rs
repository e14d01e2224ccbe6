//! Closed-form predictors: the large-`x` principal term of `𝓘` at
//! `φ₀ ∈ {0, π}` and the decay envelopes of the dispersive estimates.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::critical_points::{conjugate_frequencies, reciprocal_is_even_integer, ConjugateAngle, Sign};
use crate::error::{Error, Result};
use crate::kernel_series::{kernel_constant, ComplexValue, PhysicalPoint};
use crate::specfun::{acos_stable, log_gamma_unchecked};
use crate::spectrum::ConeParams;

/// One term `amplitude · e^{i(σ₁·frequency·x + L)} · x^d` of the principal part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalTerm {
    /// Sign of the oscillation `e^{iσ₁√(1-μ₀²)x}`; `L` is evaluated with the same sign.
    pub sigma1: Sign,
    pub mu0: f64,
    pub amplitude: f64,
    pub frequency: f64,
    /// `L = -σ₁(d/ρ)cos⁻¹μ₀ - πd/(2ρ)`.
    pub phase_constant: f64,
}

impl PrincipalTerm {
    pub fn new(params: &ConeParams, sigma1: Sign, mu0: f64) -> Self {
        let rho = params.rho();
        let d = params.d();
        Self {
            sigma1,
            mu0,
            amplitude: principal_amplitude(params, mu0),
            frequency: ((1.0 - mu0) * (1.0 + mu0)).sqrt(),
            phase_constant: -sigma1.value() * (d / rho) * acos_stable(mu0) - PI * d / (2.0 * rho),
        }
    }

    /// Value at `x`, including the growth factor `x^d`.
    pub fn eval(&self, d: f64, x: f64) -> ComplexValue {
        let phase = self.sigma1.value() * self.frequency * x + self.phase_constant;
        Complex64::from_polar(self.amplitude * x.powf(d), phase)
    }
}

/// `ρ^{2d+1} μ₀^{2d} / (d Γ(2d))`.
pub fn principal_amplitude(params: &ConeParams, mu0: f64) -> f64 {
    let rho = params.rho();
    let d = params.d();
    ((2.0 * d + 1.0) * rho.ln() + 2.0 * d * mu0.ln() - d.ln() - log_gamma_unchecked(2.0 * d)).exp()
}

/// How the label `σ₁` of `𝒟_{ρ,σ₁}(φ₀)` is matched to the sign of the oscillation.
///
/// Frequencies and amplitudes do not depend on the choice; only the phase
/// constant and the direction of rotation do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// A point of `𝒟_{σ₁}` oscillates as `e^{+iσ₁√(1-μ₀²)x}`.
    Literal,
    /// A point of `𝒟_{σ₁}` comes from `𝒞` with `-σ₁` and oscillates as `e^{-iσ₁√(1-μ₀²)x}`.
    Algebraic,
}

impl Pairing {
    pub const BOTH: [Pairing; 2] = [Pairing::Literal, Pairing::Algebraic];

    fn exponent_sign(self, label: Sign) -> Sign {
        match self {
            Pairing::Literal => label,
            Pairing::Algebraic => label.flip(),
        }
    }
}

fn check_regime(params: &ConeParams) -> Result<()> {
    if reciprocal_is_even_integer(params.rho()) {
        return Err(Error::UnsupportedRegime(format!(
            "1/rho = {} lies in 2N; the optimality analysis assumes n >= 3 and 1/rho not in 2N",
            1.0 / params.rho()
        )));
    }
    Ok(())
}

/// Terms of the principal part at `φ₀`, ordered by label `σ₁ = +, -` then by `q`.
pub fn principal_terms(params: &ConeParams, phi0: ConjugateAngle, pairing: Pairing) -> Result<Vec<PrincipalTerm>> {
    check_regime(params)?;
    Ok(Sign::BOTH
        .iter()
        .flat_map(|&label| {
            conjugate_frequencies(params.rho(), label, phi0)
                .into_iter()
                .map(move |c| PrincipalTerm::new(params, pairing.exponent_sign(label), c.mu0))
        })
        .collect())
}

/// `P(x) = Σ amplitude · e^{i(σ₁√(1-μ₀²)x + L)} · x^d`; zero when every `𝒟` set is empty.
pub fn principal_prediction(
    params: &ConeParams,
    phi0: ConjugateAngle,
    x: f64,
    pairing: Pairing,
) -> Result<ComplexValue> {
    if !(x.is_finite() && x >= 1.0) {
        return Err(Error::Domain(format!("principal prediction needs x >= 1, got {x}")));
    }
    let terms = principal_terms(params, phi0, pairing)?;
    Ok(sum_terms(&terms, params.d(), x))
}

fn sum_terms(terms: &[PrincipalTerm], d: f64, x: f64) -> ComplexValue {
    terms.iter().map(|t| t.eval(d, x)).sum()
}

/// Outcome of comparing both pairings against computed values of `𝓘`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingSelection {
    pub pairing: Pairing,
    /// Root-mean-square of `|𝓘 - P|` under the literal pairing.
    pub rms_literal: f64,
    /// Root-mean-square of `|𝓘 - P|` under the algebraic pairing.
    pub rms_algebraic: f64,
}

/// Picks the pairing whose prediction is closer to `samples` of `(x, 𝓘(x, φ₀))`.
///
/// Ties, including the all-empty case, resolve to [`Pairing::Literal`].
pub fn select_pairing(
    params: &ConeParams,
    phi0: ConjugateAngle,
    samples: &[(f64, ComplexValue)],
) -> Result<PairingSelection> {
    if samples.is_empty() {
        return Err(Error::Input("pairing selection needs at least one sample".into()));
    }
    let rms = |pairing| -> Result<f64> {
        let terms = principal_terms(params, phi0, pairing)?;
        let mut acc = 0.0;
        for &(x, v) in samples {
            if !(x.is_finite() && x >= 1.0) {
                return Err(Error::Domain(format!("principal prediction needs x >= 1, got {x}")));
            }
            acc += (v - sum_terms(&terms, params.d(), x)).norm_sqr();
        }
        Ok((acc / samples.len() as f64).sqrt())
    };
    let rms_literal = rms(Pairing::Literal)?;
    let rms_algebraic = rms(Pairing::Algebraic)?;
    let pairing = if rms_algebraic < rms_literal {
        Pairing::Algebraic
    } else {
        Pairing::Literal
    };
    Ok(PairingSelection {
        pairing,
        rms_literal,
        rms_algebraic,
    })
}

/// `|c_{n,ρ}(μ₀)| = κ_n ρ^{1-n} 2^{-n/2} · amplitude`, the coefficient of
/// `t^{-n/2} x^d e^{iσ₁√(1-μ₀²)x}` in the kernel.
pub fn kernel_coefficient_modulus(params: &ConeParams, term: &PrincipalTerm) -> f64 {
    let n = params.dim();
    kernel_constant(params) * params.rho().powf(1.0 - n) * 2f64.powf(-0.5 * n) * term.amplitude
}

/// `(1 + 1/x)^{-ν₀+d}`.
pub fn smallx_envelope(params: &ConeParams, x: f64) -> f64 {
    ((params.d() - params.nu0()) * (1.0 / x).ln_1p()).exp()
}

/// Which dispersive bound an envelope refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Uniform `t^{-n/2}` decay, valid away from conjugate angles.
    Interior,
    /// The bound carrying the extra growth factor `(1 + x)^d`.
    General,
}

/// Envelope for `|𝓘(x, ·)|`; the kernel envelope without `t^{-n/2}`.
pub fn series_envelope(params: &ConeParams, x: f64, regime: Regime) -> f64 {
    let base = smallx_envelope(params, x);
    match regime {
        Regime::Interior => base,
        Regime::General => base * (params.d() * x.ln_1p()).exp(),
    }
}

/// `t^{-n/2}(1 + 2t/(r₁r₂))^{-ν₀+d}`, times `(1 + r₁r₂/(2t))^d` in the general regime.
pub fn dispersive_envelope(params: &ConeParams, pt: PhysicalPoint, regime: Regime) -> f64 {
    pt.t.powf(-0.5 * params.dim()) * series_envelope(params, pt.x(), regime)
}
