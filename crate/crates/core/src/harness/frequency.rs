use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel_series::ComplexValue;

/// Minimum number of samples for [`dominant_frequency`].
pub const MIN_FREQUENCY_SAMPLES: usize = 256;
/// Zero-padding factor applied before the transform.
const PADDING: usize = 8;
/// A peak must exceed this multiple of the median spectral magnitude.
const PEAK_TO_MEDIAN: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FrequencyOutcome {
    /// Angular frequency (radians per unit `x`) of the strongest peak.
    Peak { frequency: f64, peak_to_median: f64 },
    /// No peak rose above the significance level.
    NoOscillation { peak_to_median: f64 },
}

impl FrequencyOutcome {
    pub fn frequency(&self) -> Option<f64> {
        match *self {
            FrequencyOutcome::Peak { frequency, .. } => Some(frequency),
            FrequencyOutcome::NoOscillation { .. } => None,
        }
    }
}

/// Strongest oscillation frequency in `samples` after removing the growth
/// `x^{expected_growth}` and the mean.
///
/// A Hann window and 8x zero padding precede the transform; the peak is refined
/// by a parabola through the log-magnitudes of its neighbours. Bins inside the
/// main lobe of the zero frequency are ignored. The sign of the frequency is
/// dropped, so `e^{iωx}`, `e^{-iωx}` and `cos ωx` all report `ω`.
pub fn dominant_frequency(samples: &[(f64, ComplexValue)], expected_growth: f64) -> Result<FrequencyOutcome> {
    let n = samples.len();
    if n < MIN_FREQUENCY_SAMPLES {
        return Err(Error::Input(format!(
            "frequency extraction needs at least {MIN_FREQUENCY_SAMPLES} samples, got {n}"
        )));
    }
    let dx = (samples[n - 1].0 - samples[0].0) / (n - 1) as f64;
    if !(dx.is_finite() && dx > 0.0) {
        return Err(Error::Input("sample grid must be increasing".into()));
    }
    for (k, s) in samples.iter().enumerate() {
        let expected = samples[0].0 + k as f64 * dx;
        if (s.0 - expected).abs() > 1e-6 * dx {
            return Err(Error::Input(format!("sample grid is not uniform near x = {}", s.0)));
        }
        if expected_growth != 0.0 && !(s.0 > 0.0) {
            return Err(Error::Input("detrending needs positive abscissae".into()));
        }
    }

    let mut signal: Vec<Complex64> = samples
        .iter()
        .map(|&(x, v)| {
            if expected_growth == 0.0 {
                v
            } else {
                v * x.powf(-expected_growth)
            }
        })
        .collect();
    let mean = signal.iter().sum::<Complex64>() / n as f64;
    let scale: f64 = signal.iter().map(|s| s.norm()).sum();
    let len = (n * PADDING).next_power_of_two();
    let mut buffer = vec![Complex64::new(0.0, 0.0); len];
    for (k, (b, s)) in buffer.iter_mut().zip(signal.drain(..)).enumerate() {
        let hann = 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos();
        *b = (s - mean) * hann;
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buffer);
    let magnitude: Vec<f64> = buffer.iter().map(|c| c.norm()).collect();

    let mut sorted = magnitude.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[len / 2];

    // Hann main lobe: two unpadded bins on either side of zero
    let guard = 2 * len / n;
    let (peak, peak_mag) = magnitude
        .iter()
        .enumerate()
        .filter(|(k, _)| *k > guard && *k < len - guard)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, m)| (k, *m))
        .expect("spectrum longer than the guard band");
    let ratio = if median > 0.0 { peak_mag / median } else { f64::INFINITY };
    // rounding noise of a non-oscillating signal can still produce an isolated peak
    if !(ratio > PEAK_TO_MEDIAN) || peak_mag <= 1e-10 * scale {
        return Ok(FrequencyOutcome::NoOscillation { peak_to_median: ratio });
    }

    let ln = |k: usize| magnitude[k].max(f64::MIN_POSITIVE).ln();
    let (a, b, c) = (ln(peak - 1), ln(peak), ln(peak + 1));
    let denom = a - 2.0 * b + c;
    let offset = if denom < 0.0 {
        (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let mut bin = peak as f64 + offset;
    if bin > 0.5 * len as f64 {
        bin -= len as f64;
    }
    Ok(FrequencyOutcome::Peak {
        frequency: (2.0 * PI * bin / (len as f64 * dx)).abs(),
        peak_to_median: ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(x0: f64, dx: f64, n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |k| x0 + dx * k as f64)
    }

    #[test]
    fn pure_cosine() {
        let n = 2048;
        let dx = 512.0 * PI / (n - 1) as f64;
        let s: Vec<_> = grid(0.0, dx, n)
            .map(|x| (x, Complex64::new((0.5 * x).cos(), 0.0)))
            .collect();
        let f = dominant_frequency(&s, 0.0).unwrap().frequency().unwrap();
        assert!((f - 0.5).abs() < 0.002, "{f}");
    }

    #[test]
    fn detrended_tone() {
        let s: Vec<_> = grid(10.0, 0.2, 1024)
            .map(|x| (x, Complex64::from_polar(x.sqrt(), 0.5 * x)))
            .collect();
        let f = dominant_frequency(&s, 0.5).unwrap().frequency().unwrap();
        assert!((f - 0.5).abs() < 0.002, "{f}");
        let s: Vec<_> = s.into_iter().map(|(x, v)| (x, v.conj())).collect();
        let f = dominant_frequency(&s, 0.5).unwrap().frequency().unwrap();
        assert!((f - 0.5).abs() < 0.002, "{f}");
    }

    #[test]
    fn interpolation_beats_half_a_bin() {
        // off-grid tones across a range of frequencies
        let n = 512;
        let dx = 0.2;
        let bin = 2.0 * PI / (n as f64 * dx);
        for k in 0..40 {
            let w = 0.1 + 0.037 * k as f64;
            let s: Vec<_> = grid(0.0, dx, n)
                .map(|x| (x, Complex64::from_polar(1.0, w * x)))
                .collect();
            let f = dominant_frequency(&s, 0.0).unwrap().frequency().unwrap();
            assert!((f - w).abs() <= 0.5 * bin, "w={w} f={f}");
        }
    }

    #[test]
    fn flat_signal_has_no_oscillation() {
        let s: Vec<_> = grid(1.0, 0.2, 512)
            .map(|x| (x, Complex64::new(2.0 * x.sqrt(), 0.0)))
            .collect();
        assert!(matches!(
            dominant_frequency(&s, 0.5).unwrap(),
            FrequencyOutcome::NoOscillation { .. }
        ));
    }

    #[test]
    fn rejects_bad_grids() {
        let s: Vec<_> = grid(1.0, 0.2, 100).map(|x| (x, Complex64::new(1.0, 0.0))).collect();
        assert!(dominant_frequency(&s, 0.0).is_err());
        let mut s: Vec<_> = grid(1.0, 0.2, 300).map(|x| (x, Complex64::new(1.0, 0.0))).collect();
        s[100].0 += 0.05;
        assert!(matches!(dominant_frequency(&s, 0.0), Err(Error::Input(_))));
    }
}
