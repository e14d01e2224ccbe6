//! Closed-form critical sets of the stationary-phase analysis.
//!
//! For a branch `σ = (σ₁, σ₂)` and winding index `q`,
//!
//! ```text
//! 𝒞_{σ,ρ}(φ, q) = { μ ∈ [0,1] : -(σ₁/ρ) cos⁻¹μ + (σ₂φ - π/(2ρ)) + 2πq = 0 }
//! ```
//!
//! which is `{cos θ_q}` when `θ_q = σ₁(σ₂ρφ - π/2 + 2πρq)` lies in `[0, π/2]`.
//! The conjugate-frequency sets at `φ₀ ∈ {0, π}` are
//!
//! ```text
//! 𝒟_{ρ,σ₁}(φ₀) = { μ ∈ (0,1) : cos⁻¹μ = σ₁(π/2 + ρφ₀ + 2πρq), q ∈ ℤ }.
//! ```
//!
//! Each interior point contributes an oscillation `e^{±i√(1-μ₀²)x}` of size `x^d`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::specfun::acos_stable;

/// Slack for floating-point membership of `θ_q` in `[0, π/2]`.
pub const MEMBERSHIP_SLACK: f64 = 1e-13;
/// Distance from `2ℕ` below which `1/ρ` counts as an even integer.
pub const EVEN_RECIPROCAL_TOL: f64 = 1e-9;

/// A sign `±1`, serialized as the integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got {v}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Branch `(σ₁, σ₂)` and winding index `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchLabel {
    pub sigma1: Sign,
    pub sigma2: Sign,
    pub q: i64,
}

impl BranchLabel {
    pub fn new(sigma1: Sign, sigma2: Sign, q: i64) -> Self {
        Self { sigma1, sigma2, q }
    }
}

/// A point of `𝒞_{σ,ρ}(φ, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalDatum {
    pub mu0: f64,
    #[serde(flatten)]
    pub branch: BranchLabel,
    /// `√(1 - μ₀²)`.
    pub frequency: f64,
    /// `θ_q` was within [`MEMBERSHIP_SLACK`] of `0` or `π/2`.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub boundary: bool,
}

/// The two angles at which conjugate frequencies are defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConjugateAngle {
    /// `φ₀ = 0`, the diagonal `y₁ = y₂`.
    #[serde(rename = "0")]
    Zero,
    /// `φ₀ = π`, conjugate pairs `y₁ = -y₂`.
    #[serde(rename = "pi")]
    Pi,
}

impl ConjugateAngle {
    pub fn radians(self) -> f64 {
        match self {
            ConjugateAngle::Zero => 0.0,
            ConjugateAngle::Pi => PI,
        }
    }

    /// Recognizes exactly `0.0` and `π`.
    pub fn from_radians(phi: f64) -> Option<Self> {
        if phi == 0.0 {
            Some(ConjugateAngle::Zero)
        } else if phi == PI {
            Some(ConjugateAngle::Pi)
        } else {
            None
        }
    }
}

impl fmt::Display for ConjugateAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjugateAngle::Zero => "0",
            ConjugateAngle::Pi => "pi",
        })
    }
}

/// A point of `𝒟_{ρ,σ₁}(φ₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugateFrequency {
    pub mu0: f64,
    pub sigma1: Sign,
    pub q: i64,
    pub frequency: f64,
}

/// Winding-index bound: every nonempty `𝒞_{σ,ρ}(φ, q)` has `|q| <= Q`.
///
/// From `|σ₂ρφ - π/2 + 2πρq| <= π/2` with `φ ∈ [0, π]`.
pub fn q_bound(rho: f64) -> i64 {
    (1.0 / (2.0 * rho) + 0.5).floor() as i64 + 1
}

fn theta(rho: f64, branch: BranchLabel, phi: f64) -> f64 {
    let q = branch.q as f64;
    branch.sigma1.value() * (branch.sigma2.value() * rho * phi - FRAC_PI_2 + 2.0 * PI * rho * q)
}

/// Left side of the defining equation of `𝒞`, evaluated at `mu`.
pub fn critical_residual(rho: f64, branch: BranchLabel, phi: f64, mu: f64) -> f64 {
    -(branch.sigma1.value() / rho) * acos_stable(mu)
        + (branch.sigma2.value() * phi - PI / (2.0 * rho))
        + 2.0 * PI * branch.q as f64
}

/// `𝒞_{σ,ρ}(φ, q)`: empty or a single point.
pub fn critical_set(rho: f64, branch: BranchLabel, phi: f64) -> Vec<CriticalDatum> {
    let th = theta(rho, branch, phi);
    if !(-MEMBERSHIP_SLACK..=FRAC_PI_2 + MEMBERSHIP_SLACK).contains(&th) {
        return Vec::new();
    }
    let (mu0, boundary) = if th.abs() <= MEMBERSHIP_SLACK {
        (1.0, true)
    } else if (th - FRAC_PI_2).abs() <= MEMBERSHIP_SLACK {
        (0.0, true)
    } else {
        (th.cos(), false)
    };
    vec![CriticalDatum {
        mu0,
        branch,
        frequency: th.sin().clamp(0.0, 1.0),
        boundary,
    }]
}

/// `𝒞_{σ,ρ}(φ) = ∪_q 𝒞_{σ,ρ}(φ, q)`, enumerated over `|q| <= Q`.
pub fn critical_union(rho: f64, sigma1: Sign, sigma2: Sign, phi: f64) -> Vec<CriticalDatum> {
    let qmax = q_bound(rho);
    (-qmax..=qmax)
        .flat_map(|q| critical_set(rho, BranchLabel::new(sigma1, sigma2, q), phi))
        .collect()
}

/// `𝒟_{ρ,σ₁}(φ₀)`, with the endpoints `μ ∈ {0, 1}` excluded.
pub fn conjugate_frequencies(rho: f64, sigma1: Sign, phi0: ConjugateAngle) -> Vec<ConjugateFrequency> {
    let qmax = q_bound(rho);
    (-qmax..=qmax)
        .filter_map(|q| {
            let th = sigma1.value() * (FRAC_PI_2 + rho * phi0.radians() + 2.0 * PI * rho * q as f64);
            (th > MEMBERSHIP_SLACK && th < FRAC_PI_2 - MEMBERSHIP_SLACK).then(|| ConjugateFrequency {
                mu0: th.cos(),
                sigma1,
                q,
                frequency: th.sin(),
            })
        })
        .collect()
}

/// Residual of the `𝒟` equation at `mu`.
pub fn conjugate_residual(rho: f64, sigma1: Sign, phi0: ConjugateAngle, q: i64, mu: f64) -> f64 {
    acos_stable(mu) - sigma1.value() * (FRAC_PI_2 + rho * phi0.radians() + 2.0 * PI * rho * q as f64)
}

/// `1/ρ ∈ 2ℕ` up to [`EVEN_RECIPROCAL_TOL`].
pub fn reciprocal_is_even_integer(rho: f64) -> bool {
    let inv = 1.0 / rho;
    let k = (0.5 * inv).round();
    k >= 1.0 && (inv - 2.0 * k).abs() <= EVEN_RECIPROCAL_TOL
}

/// Angles at which [`classify`] tabulates the critical sets.
pub const CLASSIFY_ANGLES: [f64; 5] = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI];

/// One cell of the classification table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationCell {
    pub phi: f64,
    pub branch: BranchLabel,
    pub set: Vec<f64>,
}

/// Regime flags and emptiness tables for a given `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub rho: f64,
    pub rho_at_least_one: bool,
    pub rho_above_half: bool,
    /// `1/ρ ∈ 2ℕ`: the regime excluded by the optimality analysis.
    pub reciprocal_even: bool,
    pub q_bound: i64,
    /// Every `(φ, σ₁, σ₂, q)` over [`CLASSIFY_ANGLES`] and `|q| <= Q`.
    pub cells: Vec<ClassificationCell>,
}

impl Classification {
    pub fn nonempty(&self) -> impl Iterator<Item = &ClassificationCell> {
        self.cells.iter().filter(|c| !c.set.is_empty())
    }

    pub fn cell(&self, phi: f64, branch: BranchLabel) -> Option<&ClassificationCell> {
        self.cells.iter().find(|c| c.phi == phi && c.branch == branch)
    }
}

pub fn classify(rho: f64) -> Classification {
    let qmax = q_bound(rho);
    let mut cells = Vec::new();
    for &phi in &CLASSIFY_ANGLES {
        for s1 in Sign::BOTH {
            for s2 in Sign::BOTH {
                for q in -qmax..=qmax {
                    let branch = BranchLabel::new(s1, s2, q);
                    let set = critical_set(rho, branch, phi).iter().map(|c| c.mu0).collect();
                    cells.push(ClassificationCell { phi, branch, set });
                }
            }
        }
    }
    Classification {
        rho,
        rho_at_least_one: rho >= 1.0,
        rho_above_half: rho > 0.5,
        reciprocal_even: reciprocal_is_even_integer(rho),
        q_bound: qmax,
        cells,
    }
}
