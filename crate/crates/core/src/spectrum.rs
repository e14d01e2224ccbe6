//! Cone configuration and the Bessel orders `ν_m` of the cross-section.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::MAX_GEGENBAUER_D;

/// Product cone `C(ρ S^{n-1})` with inverse-square coupling `c`.
///
/// Derived quantities `d = (n-2)/2` and `ν₀ = √(d² + c)` are cached and never
/// serialized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ConeParams {
    rho: f64,
    n: Option<u32>,
    c: f64,
    d: f64,
    nu0: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawParams {
    rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
}

impl TryFrom<RawParams> for ConeParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        match (raw.n, raw.d) {
            (Some(n), None) => ConeParams::new(raw.rho, n, raw.c),
            (None, Some(d)) => ConeParams::with_real_d(raw.rho, d, raw.c),
            _ => Err(Error::InvalidParams(
                "exactly one of \"n\" or \"d\" must be given".into(),
            )),
        }
    }
}

impl From<ConeParams> for RawParams {
    fn from(p: ConeParams) -> Self {
        RawParams {
            rho: p.rho,
            n: p.n,
            c: p.c,
            d: if p.n.is_none() { Some(p.d) } else { None },
        }
    }
}

impl ConeParams {
    /// Cone over the sphere of radius `rho` in `R^n` with coupling `c`.
    pub fn new(rho: f64, n: u32, c: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("dimension n must be >= 3, got {n}")));
        }
        let d = (n as f64 - 2.0) / 2.0;
        let mut p = Self::with_real_d(rho, d, c)?;
        p.n = Some(n);
        Ok(p)
    }

    /// Real half-dimension `d > 0` without an ambient dimension; for test harnesses.
    #[doc(hidden)]
    pub fn with_real_d(rho: f64, d: f64, c: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidParams(format!(
                "rho must be positive and finite, got {rho}"
            )));
        }
        if !(d.is_finite() && d > 0.0 && d <= MAX_GEGENBAUER_D) {
            return Err(Error::InvalidParams(format!(
                "half-dimension d must lie in (0, {MAX_GEGENBAUER_D}], got {d}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::InvalidParams(format!("c must be finite, got {c}")));
        }
        let d2 = d * d;
        if c <= -d2 {
            return Err(Error::InvalidParams(format!(
                "subcritical condition c > -((n-2)/2)^2 = {} violated by c = {c}",
                -d2
            )));
        }
        Ok(Self {
            rho,
            n: None,
            c,
            d,
            nu0: (d2 + c).sqrt(),
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Ambient dimension; `None` for parameters built from a real `d`.
    pub fn n(&self) -> Option<u32> {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `d = (n-2)/2`.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// `ν₀ = √(d² + c)`.
    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    /// Dimension as a real number, `2d + 2`.
    pub fn dim(&self) -> f64 {
        2.0 * self.d + 2.0
    }

    /// `ν_m = √(ρ^{-2} m(m+2d) + d² + c)`.
    pub fn nu(&self, m: u64) -> f64 {
        if m == 0 {
            return self.nu0;
        }
        let mf = m as f64;
        (mf * (mf + 2.0 * self.d) / (self.rho * self.rho) + (self.d * self.d + self.c)).sqrt()
    }

    /// `ν_m - (m+d)/ρ`, evaluated without cancellation.
    pub fn nu_asymptotic_gap(&self, m: u64) -> f64 {
        let linear = (m as f64 + self.d) / self.rho;
        let d2 = self.d * self.d;
        let numerator = d2 + self.c - d2 / (self.rho * self.rho);
        numerator / (self.nu(m) + linear)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nu_examples() {
        let p = ConeParams::new(1.0, 4, 0.0).unwrap();
        assert!((p.nu(5) - 6.0).abs() < 1e-14);
        let p = ConeParams::new(1.0, 3, 0.0).unwrap();
        assert!((p.nu(2) - 2.5).abs() < 1e-14);
        let p = ConeParams::new(0.5, 3, 0.0).unwrap();
        assert!((p.nu(1) - 8.25f64.sqrt()).abs() < 1e-14);
        assert!((p.nu(1) - 2.872_281_323_3).abs() < 1e-10);
    }

    #[test]
    fn nu_zero_is_nu0() {
        let p = ConeParams::new(0.7, 5, -1.2).unwrap();
        assert_eq!(p.nu(0), p.nu0());
        assert!((p.nu0() * p.nu0() - (p.d() * p.d() + p.c())).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn gap_examples() {
        let p = ConeParams::new(1.0, 3, 0.0).unwrap();
        assert_eq!(p.nu_asymptotic_gap(100), 0.0);

        // √124 - 11
        let p = ConeParams::new(1.0, 4, 3.0).unwrap();
        let g = p.nu_asymptotic_gap(10);
        assert!((g - (124f64.sqrt() - 11.0)).abs() < 1e-14);
        assert!(g.abs() * 10.0 <= 2.0 * p.c().abs() * p.rho() / 2.0);

        // m·gap → ρ(d² + c - d²/ρ²)/2 as m → ∞
        let p = ConeParams::new(2.0, 3, 0.0).unwrap();
        let g = p.nu_asymptotic_gap(1_000_000);
        let k = 2.0 * (0.25 - 0.0625) / 2.0;
        assert!(g.abs() <= 1e-6 * k * 1.000_01);
        assert!((g * 1e6 - k).abs() < 1e-6);
    }

    #[test]
    fn exact_at_unit_rho_zero_coupling() {
        for n in [3_u32, 4, 5, 8] {
            let p = ConeParams::new(1.0, n, 0.0).unwrap();
            for m in (0..=1_000_000_u64).step_by(9973) {
                let target = m as f64 + p.d();
                assert!((p.nu(m) - target).abs() <= 1e-13 * target, "n={n}, m={m}");
            }
        }
    }

    #[test]
    fn subcritical_gate() {
        assert!(matches!(ConeParams::new(1.0, 3, -0.25), Err(Error::InvalidParams(_))));
        assert!(matches!(ConeParams::new(1.0, 3, -0.3), Err(Error::InvalidParams(_))));
        assert!(ConeParams::new(1.0, 3, -0.2499).is_ok());
        assert!(ConeParams::new(0.0, 3, 0.0).is_err());
        assert!(ConeParams::new(1.0, 2, 0.0).is_err());
        assert!(ConeParams::with_real_d(1.0, -0.5, 0.0).is_err());
    }

    #[test]
    fn json_uses_rho_n_c_only() {
        let p = ConeParams::new(0.5, 3, 2.0).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"rho":0.5,"n":3,"c":2.0}"#);
        let back: ConeParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<ConeParams>(r#"{"rho":1,"n":3,"c":-1}"#).is_err());
    }

    proptest! {
        #[test]
        fn strictly_increasing(rho in 0.05f64..5.0, n in 3u32..12, frac in -0.99f64..5.0, m in 0u64..1_000_000) {
            let d = (n as f64 - 2.0) / 2.0;
            let p = ConeParams::new(rho, n, frac * d * d).unwrap();
            prop_assert!(p.nu(m + 1) > p.nu(m));
        }

        #[test]
        fn gap_decays_like_inverse_m(rho in 0.05f64..5.0, d in 0.1f64..6.0, frac in -0.99f64..5.0) {
            let p = ConeParams::with_real_d(rho, d, frac * d * d).unwrap();
            let k = (d * d + p.c() - d * d / (rho * rho)).abs() * rho;
            for m in [1_u64, 10, 1000, 100_000] {
                prop_assert!(p.nu_asymptotic_gap(m).abs() * m as f64 <= k + 1e-12);
            }
        }
    }
}
