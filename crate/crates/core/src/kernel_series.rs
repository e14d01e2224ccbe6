//! The spectral sum
//!
//! ```text
//! 𝓘(x, φ) = x^{-d} Σ_{m>=0} e^{-iπν_m/2} J_{ν_m}(x) ((m+d)/d) C_m^d(cos φ)
//! ```
//!
//! and the physical propagator kernel assembled from it.
//!
//! Truncation is certified with the bound `|J_ν(x)| <= (x/2)^ν / Γ(ν+1)` and
//! `|C_m^d(cos φ)| <= C_m^d(1)`. Terms are summed in ascending `m` with
//! compensated accumulation, so repeated evaluations are bitwise identical.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    bessel_j_estimate, gegenbauer_sequence, ln_gegenbauer_at_one, ln_power_bound, log_gamma_unchecked, sum::NeumaierSum,
};
use crate::spectrum::ConeParams;

pub type ComplexValue = Complex64;

/// Largest truncation index the tail certification will attempt.
pub const MAX_TERMS: u64 = 10_000_000;

/// Spectral coordinates `x = r₁r₂/(2t)`, `φ = cos⁻¹(ρ^{-2} y₁·y₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub x: f64,
    pub phi: f64,
}

impl KernelPoint {
    pub fn new(x: f64, phi: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
        }
        check_angle(phi)?;
        Ok(Self { x, phi })
    }
}

/// Physical coordinates `(t, r₁, r₂)` and the spherical angle between `y₁` and `y₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalPoint {
    pub t: f64,
    pub r1: f64,
    pub r2: f64,
    pub phi: f64,
}

impl PhysicalPoint {
    pub fn new(t: f64, r1: f64, r2: f64, phi: f64) -> Result<Self> {
        for (name, v) in [("t", t), ("r1", r1), ("r2", r2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        check_angle(phi)?;
        Ok(Self { t, r1, r2, phi })
    }

    /// `x = r₁r₂/(2t)`.
    pub fn x(&self) -> f64 {
        self.r1 * self.r2 / (2.0 * self.t)
    }

    pub fn kernel_point(&self) -> Result<KernelPoint> {
        KernelPoint::new(self.x(), self.phi)
    }
}

fn check_angle(phi: f64) -> Result<()> {
    if !(phi.is_finite() && (0.0..=PI).contains(&phi)) {
        return Err(Error::Domain(format!("phi must lie in [0, pi], got {phi}")));
    }
    Ok(())
}

/// Value of the truncated series with its certification data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: ComplexValue,
    /// Number of terms `M + 1` in the truncated sum.
    pub terms_used: u64,
    /// Analytic bound on the discarded terms `m > M`.
    pub tail_bound: f64,
    /// Accumulated Bessel error estimates plus bounds on terms skipped as negligible.
    pub special_function_error: f64,
}

/// Truncation index with its certified tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub last_index: u64,
    pub tail_bound: f64,
}

/// Log of the term bound `x^{-d} ((m+d)/d) C_m^d(1) (x/2)^{ν_m} / Γ(ν_m + 1)`.
fn ln_term_bound(params: &ConeParams, x: f64, m: u64) -> f64 {
    let d = params.d();
    let nu = params.nu(m);
    -d * x.ln() + ((m as f64 + d) / d).ln() + ln_gegenbauer_at_one(m, d) + ln_power_bound(nu, x)
}

/// Smallest `M` whose analytic tail bound `Σ_{m>M}` falls below `tol`.
pub fn truncation_index(params: &ConeParams, x: f64, tol: f64) -> Result<u64> {
    truncation(params, x, tol).map(|t| t.last_index)
}

/// [`truncation_index`] together with the achieved tail bound.
pub fn truncation(params: &ConeParams, x: f64, tol: f64) -> Result<Truncation> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let ln_small = (tol / 10.0).ln();
    let mut ln_terms: Vec<f64> = Vec::new();
    let mut m = 0u64;
    let closure = loop {
        if m > MAX_TERMS {
            return Err(Error::Capacity(format!(
                "tail bound below {tol:e} not certified within {MAX_TERMS} terms at x = {x}"
            )));
        }
        let b = ln_term_bound(params, x, m);
        ln_terms.push(b);
        if m >= 1 && b < ln_small && params.nu(m) > x {
            // Once ν_m > x the ratio of consecutive bounds is below one and
            // non-increasing, so the tail is dominated by a geometric series.
            // Wide cones have ν_m ≈ m/ρ and ratios close to one.
            let next = ln_term_bound(params, x, m + 1);
            let ln_ratio = next - b;
            if ln_ratio < 0.0 && ln_term_bound(params, x, m + 2) - next <= ln_ratio {
                let r = ln_ratio.exp();
                let closure = b.exp() * r / (1.0 - r);
                if closure < 1e-3 * tol {
                    break closure;
                }
            }
        }
        m += 1;
    };
    // suffix sums: tail(k) = Σ_{j>k} t_j + closure
    let mut tail = closure;
    let mut best: Option<(u64, f64)> = None;
    for k in (0..ln_terms.len()).rev() {
        if tail < tol {
            best = Some((k as u64, tail));
        } else {
            break;
        }
        tail += ln_terms[k].exp();
    }
    let (last_index, tail_bound) =
        best.ok_or_else(|| Error::Capacity(format!("tail bound certification failed at x = {x}, tol = {tol:e}")))?;
    Ok(Truncation { last_index, tail_bound })
}

/// `ln` of Kapteyn's bound `|J_ν(νz)| <= (z e^{√(1-z²)} / (1+√(1-z²)))^ν`, `0 < z <= 1`.
fn ln_kapteyn_bound(nu: f64, x: f64) -> f64 {
    if nu <= x || nu == 0.0 {
        return 0.0;
    }
    let z = x / nu;
    let s = ((1.0 - z) * (1.0 + z)).sqrt();
    nu * (z.ln() + s - s.ln_1p())
}

/// `e^{-iπν/2}` with the angle reduced modulo 4.
fn quarter_turn_phase(nu: f64) -> Complex64 {
    let r = nu - 4.0 * (nu / 4.0).floor();
    let angle = 0.5 * PI * r;
    Complex64::new(angle.cos(), -angle.sin())
}

/// Bessel-dependent part of each term: `e^{-iπν_m/2} J_{ν_m}(x) (m+d)/d`.
struct BesselColumn {
    coefficients: Vec<Complex64>,
    error: f64,
}

fn bessel_column(params: &ConeParams, x: f64, last_index: u64, tol: f64) -> Result<BesselColumn> {
    let d = params.d();
    let ln_x_d = d * x.ln();
    let len = last_index as usize + 1;
    // Terms whose magnitude bound is below this are not evaluated.
    let negligible = (1e-3 * tol / len as f64).ln();
    let mut coefficients = Vec::with_capacity(len);
    let mut error = 0.0;
    for m in 0..=last_index {
        let nu = params.nu(m);
        let weight = (m as f64 + d) / d;
        let ln_scale = weight.ln() + ln_gegenbauer_at_one(m, d) - ln_x_d;
        let ln_bound = ln_power_bound(nu, x).min(ln_kapteyn_bound(nu, x));
        if ln_bound + ln_scale < negligible {
            coefficients.push(Complex64::new(0.0, 0.0));
            error += (ln_bound + ln_scale).exp();
            continue;
        }
        let j = bessel_j_estimate(nu, x)?;
        error += j.error * (ln_scale.exp());
        coefficients.push(quarter_turn_phase(nu) * (j.value * weight));
    }
    Ok(BesselColumn { coefficients, error })
}

fn cos_exact_endpoints(phi: f64) -> f64 {
    if phi == 0.0 {
        1.0
    } else if phi == PI {
        -1.0
    } else {
        phi.cos()
    }
}

fn contract(params: &ConeParams, x: f64, column: &[Complex64], phi: f64) -> Result<Complex64> {
    let geg = gegenbauer_sequence(column.len() - 1, params.d(), cos_exact_endpoints(phi))?;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for (a, g) in column.iter().zip(&geg) {
        re.add(a.re * g);
        im.add(a.im * g);
    }
    let scale = x.powf(-params.d());
    Ok(Complex64::new(re.value() * scale, im.value() * scale))
}

/// `𝓘_{ρ,d,c}(x, φ)` with certified truncation error below `tol`.
pub fn eval_series(params: &ConeParams, pt: KernelPoint, tol: f64) -> Result<SeriesResult> {
    let mut out = eval_series_angles(params, pt.x, &[pt.phi], tol)?;
    Ok(out.pop().expect("one angle in, one result out"))
}

/// `𝓘(x, φ)` for several angles at one `x`, sharing the Bessel evaluations.
///
/// Each entry is bitwise identical to the corresponding [`eval_series`] call.
pub fn eval_series_angles(params: &ConeParams, x: f64, phis: &[f64], tol: f64) -> Result<Vec<SeriesResult>> {
    for &phi in phis {
        KernelPoint::new(x, phi)?;
    }
    let trunc = truncation(params, x, tol)?;
    let column = bessel_column(params, x, trunc.last_index, tol)?;
    let special_function_error = column.error;
    phis.iter()
        .map(|&phi| {
            let value = contract(params, x, &column.coefficients, phi)?;
            Ok(SeriesResult {
                value,
                terms_used: trunc.last_index + 1,
                tail_bound: trunc.tail_bound,
                special_function_error,
            })
        })
        .collect()
}

/// Partial sum `Σ_{m=0}^{last_index}` with no tail certification; every term is evaluated.
pub fn eval_partial_sum(params: &ConeParams, pt: KernelPoint, last_index: u64) -> Result<ComplexValue> {
    let d = params.d();
    let mut column = Vec::with_capacity(last_index as usize + 1);
    for m in 0..=last_index {
        let nu = params.nu(m);
        let j = bessel_j_estimate(nu, pt.x)?;
        column.push(quarter_turn_phase(nu) * (j.value * (m as f64 + d) / d));
    }
    contract(params, pt.x, &column, pt.phi)
}

/// `κ_n = d 2^d Γ(d) (2π)^{-n/2}`, the modulus of the dimensional constant that
/// normalizes the flat (`ρ = 1`, `c = 0`) kernel to `(4πt)^{-n/2}`.
pub fn kernel_constant(params: &ConeParams) -> f64 {
    let d = params.d();
    let n = params.dim();
    (d.ln() + d * 2f64.ln() + log_gamma_unchecked(d) - 0.5 * n * (2.0 * PI).ln()).exp()
}

/// Propagator kernel `e^{itH}(r₁, y₁, r₂, y₂)`:
///
/// ```text
/// κ_n ρ^{1-n} (2t)^{-n/2} · e^{-(r₁²+r₂²)/(4it)} · (1/i) · 𝓘(r₁r₂/(2t), φ)
/// ```
///
/// The Gaussian factor is evaluated as `e^{+i(r₁²+r₂²)/(4t)}`, since
/// `-1/(4it) = i/(4t)`. Only `|c_n'|` is fixed, so the overall phase is a
/// convention; `t < 0` follows from conjugation with swapped arguments.
pub fn eval_kernel(params: &ConeParams, pt: PhysicalPoint, tol: f64) -> Result<ComplexValue> {
    eval_kernel_detailed(params, pt, tol).map(|(k, _)| k)
}

/// [`eval_kernel`] together with the series result it was assembled from.
pub fn eval_kernel_detailed(params: &ConeParams, pt: PhysicalPoint, tol: f64) -> Result<(ComplexValue, SeriesResult)> {
    let series = eval_series(params, pt.kernel_point()?, tol)?;
    let n = params.dim();
    let prefactor = kernel_constant(params) * params.rho().powf(1.0 - n) * (2.0 * pt.t).powf(-0.5 * n);
    let gauss = Complex64::from_polar(1.0, (pt.r1 * pt.r1 + pt.r2 * pt.r2) / (4.0 * pt.t));
    Ok((series.value * gauss * Complex64::new(0.0, -1.0) * prefactor, series))
}
