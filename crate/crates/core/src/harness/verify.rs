use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::fit::{fit_decay_exponent, WindowGrid};
use super::scan::{scan, ScanOptions, ScanTable};
use crate::error::{Error, Result};
use crate::spectrum::ConeParams;

/// Default multiplicative threshold for boundedness checks.
pub const DEFAULT_THRESHOLD: f64 = 10.0;
/// Default angular distance from the conjugate angles defining interior angles.
pub const DEFAULT_EPSILON0: f64 = 0.4;
/// Values of `ε₀` reported by [`interior_sensitivity`].
pub const SENSITIVITY_EPSILON0: [f64; 3] = [0.2, 0.4, 0.6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `|𝓘| <= C (1 + 1/x)^{-ν₀+d}`.
    Interior,
    /// `|𝓘| <= C (1 + x)^d (1 + 1/x)^{-ν₀+d}`.
    General,
    /// Two-sided small-`x` bound with envelope `(1 + 1/x)^{-ν₀+d}`.
    Smallx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: BoundKind,
    pub threshold: f64,
    pub sup_ratio: f64,
    pub inf_ratio: f64,
    /// Index into the table rows of the largest ratio.
    pub argmax: usize,
    pub argmax_x: f64,
    pub argmax_phi: f64,
    pub rows_checked: usize,
    pub failed_rows: usize,
    pub pass: bool,
}

/// Largest `|𝓘| / envelope` over the table.
///
/// Passes when the supremum is at most `threshold` and no row failed to
/// evaluate; the small-`x` bound additionally needs a strictly positive infimum.
pub fn verify_bound(table: &ScanTable, which: BoundKind, threshold: f64) -> Result<BoundReport> {
    if table.rows.is_empty() {
        return Err(Error::Input("cannot verify a bound on an empty table".into()));
    }
    let mut sup = (f64::NEG_INFINITY, 0usize);
    let mut inf = f64::INFINITY;
    let mut checked = 0;
    for (k, r) in table.rows.iter().enumerate() {
        let Some(m) = r.modulus else { continue };
        let env = match which {
            BoundKind::Interior | BoundKind::Smallx => r.envelope_interior,
            BoundKind::General => r.envelope_general,
        };
        let ratio = m / env;
        checked += 1;
        if ratio > sup.0 {
            sup = (ratio, k);
        }
        inf = inf.min(ratio);
    }
    let failed_rows = table.failed_rows();
    if checked == 0 {
        return Err(Error::Input("no row of the table was evaluated".into()));
    }
    let pass = failed_rows == 0 && sup.0 <= threshold && (which != BoundKind::Smallx || inf > 0.0);
    Ok(BoundReport {
        bound: which,
        threshold,
        sup_ratio: sup.0,
        inf_ratio: inf,
        argmax: sup.1,
        argmax_x: table.rows[sup.1].x,
        argmax_phi: table.rows[sup.1].phi,
        rows_checked: checked,
        failed_rows,
        pass,
    })
}

/// `ε₀`, `π/2` and `π - ε₀`: the ends and centre of the interior range.
pub fn interior_angles(epsilon0: f64) -> [f64; 3] {
    [epsilon0, PI / 2.0, PI - epsilon0]
}

/// Upper-envelope slopes of `|𝓘|` at the interior angles for one `ε₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorReport {
    pub epsilon0: f64,
    pub angles: Vec<f64>,
    pub slopes: Vec<f64>,
    pub max_slope: f64,
    pub sup_modulus: f64,
}

impl InteriorReport {
    /// Reads the interior angles for `epsilon0` out of a table sampled on `grid`.
    pub fn from_table(table: &ScanTable, grid: &WindowGrid, epsilon0: f64) -> Result<Self> {
        let angles = interior_angles(epsilon0).to_vec();
        let mut slopes = Vec::new();
        let mut sup_modulus: f64 = 0.0;
        for &phi in &angles {
            let moduli = table.moduli(phi);
            if moduli.is_empty() {
                return Err(Error::Input(format!("table has no rows at phi = {phi}")));
            }
            sup_modulus = moduli.iter().map(|m| m.1).fold(sup_modulus, f64::max);
            slopes.push(fit_decay_exponent(&grid.maxima(&moduli))?.slope);
        }
        let max_slope = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            epsilon0,
            angles,
            slopes,
            max_slope,
            sup_modulus,
        })
    }
}

/// Interior reports for every `ε₀` in [`SENSITIVITY_EPSILON0`], from one shared scan.
pub fn interior_sensitivity(
    params: &ConeParams,
    grid: &WindowGrid,
    options: ScanOptions,
) -> Result<Vec<InteriorReport>> {
    let mut phis: Vec<f64> = SENSITIVITY_EPSILON0.iter().flat_map(|&e| interior_angles(e)).collect();
    phis.sort_by(f64::total_cmp);
    phis.dedup();
    let table = scan(params, &grid.points(), &phis, options)?;
    SENSITIVITY_EPSILON0
        .iter()
        .map(|&e| InteriorReport::from_table(&table, grid, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ScanOptions;

    #[test]
    fn flat_cone_ratio_is_the_euclidean_constant() {
        let p = ConeParams::new(1.0, 3, 0.0).unwrap();
        let xs: Vec<f64> = (0..25).map(|k| 0.1 * 5000f64.powf(k as f64 / 24.0)).collect();
        let t = scan(&p, &xs, &[0.0, 1.0, PI], ScanOptions::default()).unwrap();
        let r = verify_bound(&t, BoundKind::Interior, DEFAULT_THRESHOLD).unwrap();
        assert!(r.pass);
        let k = (2.0 / PI).sqrt();
        assert!((r.sup_ratio - k).abs() < 1e-8 && (r.inf_ratio - k).abs() < 1e-8);
    }

    #[test]
    fn small_x_is_two_sided() {
        for (rho, c) in [(1.0, 2.0), (0.4, 0.0), (2.0, -0.2)] {
            let p = ConeParams::new(rho, 3, c).unwrap();
            let xs: Vec<f64> = (0..25).map(|k| 1e-6 * 1e6f64.powf(k as f64 / 24.0)).collect();
            let t = scan(&p, &xs, &[0.0, PI / 2.0, PI], ScanOptions::default()).unwrap();
            let r = verify_bound(&t, BoundKind::Smallx, DEFAULT_THRESHOLD).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.inf_ratio > 0.0 && r.inf_ratio <= r.sup_ratio);
        }
    }

    #[test]
    fn empty_table_is_an_error() {
        let p = ConeParams::new(1.0, 3, 0.0).unwrap();
        let t = ScanTable {
            params: p,
            rows: vec![],
            predictions: vec![],
        };
        assert!(matches!(
            verify_bound(&t, BoundKind::General, 10.0),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn failed_rows_fail_the_check() {
        let p = ConeParams::new(1.0, 3, 0.0).unwrap();
        let mut t = scan(&p, &[1.0, 2.0], &[0.0], ScanOptions::default()).unwrap();
        t.rows[1].value = None;
        t.rows[1].modulus = None;
        t.rows[1].error = Some("x".into());
        let r = verify_bound(&t, BoundKind::Interior, 10.0).unwrap();
        assert!(!r.pass);
        assert_eq!(r.rows_checked, 1);
    }
}
