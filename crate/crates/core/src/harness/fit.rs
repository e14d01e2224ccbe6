use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares fit of `log(magnitude) = slope · log(x) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub x_range: (f64, f64),
}

/// Minimum number of samples accepted by [`fit_decay_exponent`].
pub const MIN_FIT_SAMPLES: usize = 8;

/// Ordinary least squares of `ln|value|` against `ln x`.
///
/// For oscillatory data pass an upper envelope ([`octave_maxima`],
/// [`WindowGrid::maxima`]) rather than raw samples.
pub fn fit_decay_exponent(samples: &[(f64, f64)]) -> Result<FitResult> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::Input(format!(
            "decay fit needs at least {MIN_FIT_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    for &(x, m) in samples {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Input(format!("sample abscissa must be positive, got {x}")));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Input(format!(
                "sample magnitude must be positive, got {m} at x = {x}"
            )));
        }
    }
    let mut xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Input("sample abscissae must be distinct".into()));
    }

    let n = samples.len() as f64;
    let (u, v): (Vec<f64>, Vec<f64>) = samples.iter().map(|&(x, m)| (x.ln(), m.ln())).unzip();
    let mean_u = u.iter().sum::<f64>() / n;
    let mean_v = v.iter().sum::<f64>() / n;
    let (mut suu, mut suv, mut svv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(&v) {
        let (du, dv) = (a - mean_u, b - mean_v);
        suu += du * du;
        suv += du * dv;
        svv += dv * dv;
    }
    let slope = suv / suu;
    let intercept = mean_v - slope * mean_u;
    // data that are constant up to rounding fit exactly
    let noise = f64::EPSILON * v.iter().fold(1.0_f64, |a, b| a.max(b.abs()));
    let r_squared = if svv <= n * noise * noise {
        1.0
    } else {
        (suv * suv / (suu * svv)).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        x_range: (xs[0], xs[xs.len() - 1]),
    })
}

/// Maximum of each logarithmic bin `[x₀2^{k/b}, x₀2^{(k+1)/b})`, reported at
/// the abscissa where it is attained. Empty bins are dropped.
pub fn octave_maxima(samples: &[(f64, f64)], bins_per_octave: usize) -> Vec<(f64, f64)> {
    let Some(x0) = samples.iter().map(|s| s.0).filter(|x| *x > 0.0).min_by(f64::total_cmp) else {
        return Vec::new();
    };
    let b = bins_per_octave.max(1) as f64;
    let mut bins: Vec<(i64, f64, f64)> = Vec::new();
    for &(x, m) in samples {
        if !(x > 0.0) {
            continue;
        }
        // bin index with a small guard so grid points at exact bin edges are stable
        let k = ((x / x0).log2() * b + 1e-9).floor() as i64;
        match bins.iter_mut().find(|e| e.0 == k) {
            Some(e) if m > e.2 => *e = (k, x, m),
            Some(_) => {}
            None => bins.push((k, x, m)),
        }
    }
    bins.sort_by_key(|e| e.0);
    bins.into_iter().map(|(_, x, m)| (x, m)).collect()
}

/// Short uniform windows at log-spaced centres.
///
/// Sampling every window densely captures the local supremum of an
/// oscillating modulus at a fraction of the cost of a dense global grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowGrid {
    pub centers: Vec<f64>,
    pub width: f64,
    pub step: f64,
}

impl WindowGrid {
    pub fn log_spaced(x_min: f64, x_max: f64, windows: usize, width: f64, step: f64) -> Result<Self> {
        if !(x_min > 0.0 && x_max > x_min && windows >= 2 && width >= 0.0 && step > 0.0) {
            return Err(Error::Input(format!(
                "invalid window grid: x in [{x_min}, {x_max}], {windows} windows, width {width}, step {step}"
            )));
        }
        if x_min - 0.5 * width <= 0.0 {
            return Err(Error::Input("first window extends to nonpositive x".into()));
        }
        let r = (x_max / x_min).ln() / (windows - 1) as f64;
        let centers = (0..windows).map(|k| x_min * (r * k as f64).exp()).collect();
        Ok(Self { centers, width, step })
    }

    fn window(&self, center: f64) -> Vec<f64> {
        let k = (0.5 * self.width / self.step).floor() as i64;
        (-k..=k).map(|j| center + j as f64 * self.step).collect()
    }

    /// All sample points, sorted and deduplicated.
    pub fn points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.centers.iter().flat_map(|&c| self.window(c)).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Keeps only windows whose centre lies in `[lo, hi]`.
    pub fn restricted(&self, lo: f64, hi: f64) -> Self {
        Self {
            centers: self.centers.iter().copied().filter(|c| (lo..=hi).contains(c)).collect(),
            width: self.width,
            step: self.step,
        }
    }

    /// Per-window maximum of `samples`, reported at the maximizing sample.
    ///
    /// Overlapping windows can share a maximizing sample; it is kept once.
    pub fn maxima(&self, samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let half = 0.5 * self.width * (1.0 + 1e-12);
        let mut out: Vec<(f64, f64)> = self
            .centers
            .iter()
            .filter_map(|&c| {
                samples
                    .iter()
                    .filter(|s| (s.0 - c).abs() <= half && s.1.is_finite())
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .copied()
            })
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.dedup_by(|a, b| a.0 == b.0);
        out
    }
}
