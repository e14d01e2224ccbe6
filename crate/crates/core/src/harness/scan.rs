use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{principal_terms, select_pairing, series_envelope, PairingSelection, Regime};
use crate::critical_points::ConjugateAngle;
use crate::error::{Error, Result};
use crate::kernel_series::{eval_series_angles, ComplexValue, KernelPoint};
use crate::spectrum::ConeParams;

/// CSV header written by [`ScanTable::write_csv`].
pub const CSV_HEADER: [&str; 9] = [
    "x",
    "phi",
    "re",
    "im",
    "modulus",
    "env_interior",
    "env_general",
    "pred_re",
    "pred_im",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub tol: f64,
    /// Attach principal-term predictions on rows with `φ ∈ {0, π}` and `x >= 1`.
    pub with_prediction: bool,
    pub workers: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            with_prediction: false,
            workers: 1,
        }
    }
}

/// One grid point. A failed evaluation leaves `value` empty and sets `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub x: f64,
    pub phi: f64,
    pub value: Option<ComplexValue>,
    pub modulus: Option<f64>,
    pub envelope_interior: f64,
    pub envelope_general: f64,
    pub prediction: Option<ComplexValue>,
    pub terms_used: Option<u64>,
    pub error: Option<String>,
}

/// Pairing chosen for the predictions at one of the conjugate angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionMeta {
    pub phi0: ConjugateAngle,
    pub selection: Option<PairingSelection>,
    /// Why no prediction was attached, when none was.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub params: ConeParams,
    /// Sorted by `(phi, x)`.
    pub rows: Vec<ScanRow>,
    pub predictions: Vec<PredictionMeta>,
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Input(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Input(format!("{name} grid must be strictly increasing")));
    }
    Ok(())
}

/// Evaluates `𝓘` on `x_grid × phi_grid` with envelopes and optional predictions.
///
/// Work is split by `x` across `options.workers` threads; every row is computed
/// independently, so the table is bitwise identical for any worker count.
pub fn scan(params: &ConeParams, x_grid: &[f64], phi_grid: &[f64], options: ScanOptions) -> Result<ScanTable> {
    check_grid("x", x_grid)?;
    check_grid("phi", phi_grid)?;
    for &x in x_grid {
        for &phi in phi_grid {
            KernelPoint::new(x, phi)?;
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| Error::Capacity(format!("cannot start worker pool: {e}")))?;
    let columns: Vec<Result<Vec<(ComplexValue, u64)>>> = pool.install(|| {
        x_grid
            .par_iter()
            .map(|&x| {
                eval_series_angles(params, x, phi_grid, options.tol)
                    .map(|v| v.into_iter().map(|r| (r.value, r.terms_used)).collect())
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(x_grid.len() * phi_grid.len());
    for (j, &phi) in phi_grid.iter().enumerate() {
        for (&x, column) in x_grid.iter().zip(&columns) {
            let (value, terms_used, error) = match column {
                Ok(c) => (Some(c[j].0), Some(c[j].1), None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            rows.push(ScanRow {
                x,
                phi,
                value,
                modulus: value.map(|v| v.norm()),
                envelope_interior: series_envelope(params, x, Regime::Interior),
                envelope_general: series_envelope(params, x, Regime::General),
                prediction: None,
                terms_used,
                error,
            });
        }
    }

    let mut predictions = Vec::new();
    if options.with_prediction {
        for &phi in phi_grid {
            if let Some(phi0) = ConjugateAngle::from_radians(phi) {
                predictions.push(attach_predictions(params, phi0, &mut rows));
            }
        }
    }
    Ok(ScanTable {
        params: *params,
        rows,
        predictions,
    })
}

fn attach_predictions(params: &ConeParams, phi0: ConjugateAngle, rows: &mut [ScanRow]) -> PredictionMeta {
    let phi = phi0.radians();
    let samples: Vec<(f64, ComplexValue)> = rows
        .iter()
        .filter(|r| r.phi == phi && r.x >= 1.0)
        .filter_map(|r| r.value.map(|v| (r.x, v)))
        .collect();
    let note = |s: String| PredictionMeta {
        phi0,
        selection: None,
        note: Some(s),
    };
    if samples.is_empty() {
        return note("no evaluated rows with x >= 1".into());
    }
    let selection = match select_pairing(params, phi0, &samples) {
        Ok(s) => s,
        Err(e) => return note(e.to_string()),
    };
    let terms = match principal_terms(params, phi0, selection.pairing) {
        Ok(t) => t,
        Err(e) => return note(e.to_string()),
    };
    for r in rows.iter_mut().filter(|r| r.phi == phi && r.x >= 1.0) {
        r.prediction = Some(terms.iter().map(|t| t.eval(params.d(), r.x)).sum());
    }
    PredictionMeta {
        phi0,
        selection: Some(selection),
        note: None,
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

impl ScanTable {
    /// Rows at angle `phi`, in increasing `x`.
    pub fn at_angle(&self, phi: f64) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(move |r| r.phi == phi)
    }

    /// `(x, |𝓘|)` for evaluated rows at `phi`.
    pub fn moduli(&self, phi: f64) -> Vec<(f64, f64)> {
        self.at_angle(phi).filter_map(|r| r.modulus.map(|m| (r.x, m))).collect()
    }

    /// `(x, 𝓘)` for evaluated rows at `phi`.
    pub fn values(&self, phi: f64) -> Vec<(f64, ComplexValue)> {
        self.at_angle(phi).filter_map(|r| r.value.map(|v| (r.x, v))).collect()
    }

    /// `(x, |𝓘 - P|)` for rows at `phi` that carry a prediction.
    pub fn residuals(&self, phi: f64) -> Vec<(f64, f64)> {
        self.at_angle(phi)
            .filter_map(|r| Some((r.x, (r.value? - r.prediction?).norm())))
            .collect()
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// CSV with 17 significant digits; fields of failed rows and missing
    /// predictions are left empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
            w.write_record([
                num(r.x),
                num(r.phi),
                opt(r.value.map(|v| v.re)),
                opt(r.value.map(|v| v.im)),
                opt(r.modulus),
                num(r.envelope_interior),
                num(r.envelope_general),
                opt(r.prediction.map(|v| v.re)),
                opt(r.prediction.map(|v| v.im)),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_series::eval_series;
    use std::f64::consts::PI;

    #[test]
    fn single_point_matches_direct_call() {
        let p = ConeParams::new(0.7, 3, 0.4).unwrap();
        let t = scan(&p, &[12.5], &[1.1], ScanOptions::default()).unwrap();
        let direct = eval_series(&p, KernelPoint::new(12.5, 1.1).unwrap(), 1e-10).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].value, Some(direct.value));
        assert_eq!(t.rows[0].modulus, Some(direct.value.norm()));
    }

    #[test]
    fn rows_sorted_by_angle_then_x() {
        let p = ConeParams::new(1.3, 3, 0.0).unwrap();
        let t = scan(&p, &[0.5, 1.0, 4.0], &[0.0, 1.0, PI], ScanOptions::default()).unwrap();
        assert!(t.rows.windows(2).all(|w| (w[0].phi, w[0].x) < (w[1].phi, w[1].x)));
    }

    #[test]
    fn worker_count_does_not_change_the_table() {
        let p = ConeParams::new(1.0 / 3.0, 3, 0.0).unwrap();
        let xs: Vec<f64> = (1..=24).map(|k| 3.0 * k as f64).collect();
        let phis = [0.0, 0.4, PI];
        let opts = ScanOptions {
            with_prediction: true,
            ..Default::default()
        };
        let one = scan(&p, &xs, &phis, ScanOptions { workers: 1, ..opts }).unwrap();
        let many = scan(&p, &xs, &phis, ScanOptions { workers: 8, ..opts }).unwrap();
        assert_eq!(one, many);
        let mut a = Vec::new();
        let mut b = Vec::new();
        one.write_csv(&mut a).unwrap();
        many.write_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_are_recorded_in_row() {
        // the wide cone cannot certify its tail at huge x; the scan carries on
        let p = ConeParams::new(50.0, 3, 0.0).unwrap();
        let t = scan(&p, &[1.0, 2e5], &[0.0], ScanOptions::default()).unwrap();
        assert_eq!(t.failed_rows(), 1);
        assert!(t.rows[0].value.is_some());
        assert!(t.rows[1].value.is_none() && t.rows[1].error.as_deref().unwrap().contains("capacity"));
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let line = text.lines().nth(2).unwrap();
        assert_eq!(line.split(',').nth(2), Some(""));
    }

    #[test]
    fn predictions_vanish_for_wide_cones() {
        let p = ConeParams::new(1.5, 3, 0.0).unwrap();
        let xs: Vec<f64> = (0..50).map(|k| 300f64.powf(k as f64 / 49.0)).collect();
        let t = scan(
            &p,
            &xs,
            &[0.0, PI / 2.0, PI],
            ScanOptions {
                with_prediction: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(t.predictions.len(), 2);
        for r in &t.rows {
            if r.phi == PI / 2.0 {
                assert!(r.prediction.is_none());
            } else {
                assert_eq!(r.prediction, Some(ComplexValue::new(0.0, 0.0)));
            }
        }
        // bounded by the interior envelope with a constant fitted on the scan
        let c = t
            .rows
            .iter()
            .map(|r| r.modulus.unwrap() / r.envelope_interior)
            .fold(0.0, f64::max);
        let floor = t
            .rows
            .iter()
            .map(|r| r.envelope_interior * c)
            .fold(f64::INFINITY, f64::min);
        assert!(t.rows.iter().all(|r| r.modulus.unwrap() <= 10.0 * floor));
    }

    #[test]
    fn csv_format() {
        let p = ConeParams::new(1.0, 3, 0.0).unwrap();
        let t = scan(
            &p,
            &[1.0, 2.0],
            &[0.0],
            ScanOptions {
                with_prediction: true,
                ..Default::default()
            },
        )
        .unwrap();
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "x,phi,re,im,modulus,env_interior,env_general,pred_re,pred_im"
        );
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[0], "1.0000000000000000e0");
        let modulus: f64 = fields[4].parse().unwrap();
        assert_eq!(modulus, t.rows[0].modulus.unwrap());
        // 1/ρ = 1 is odd, so predictions exist (and vanish)
        assert_eq!(fields[7].parse::<f64>().unwrap(), 0.0);
    }

    #[test]
    fn excluded_regime_leaves_predictions_empty() {
        let p = ConeParams::new(0.5, 3, 0.0).unwrap();
        let t = scan(
            &p,
            &[2.0, 3.0],
            &[0.0],
            ScanOptions {
                with_prediction: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(t.rows.iter().all(|r| r.prediction.is_none()));
        assert!(t.predictions[0].note.as_deref().unwrap().contains("2N"));
    }

    #[test]
    fn rejects_unsorted_grids() {
        let p = ConeParams::new(1.0, 3, 0.0).unwrap();
        assert!(scan(&p, &[2.0, 1.0], &[0.0], ScanOptions::default()).is_err());
        assert!(scan(&p, &[], &[0.0], ScanOptions::default()).is_err());
        assert!(scan(&p, &[1.0], &[0.0, 0.0], ScanOptions::default()).is_err());
    }
}
