use crate::error::{Error, Result};

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)), k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_TARGET: f64 = 10.0;

/// Natural logarithm of the gamma function for positive real arguments.
///
/// Uses the Stirling series for `z >= 10` and upward recurrence below that.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires z > 0, got {z}")));
    }
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked(z: f64) -> f64 {
    if z >= SHIFT_TARGET {
        return stirling(z);
    }
    let mut shifted = z;
    let mut product = 1.0;
    while shifted < SHIFT_TARGET {
        product *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - product.ln()
}

fn stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING {
        series += c * power;
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series
}

/// `ln C_m^d(1) = ln Γ(m+2d) - ln Γ(m+1) - ln Γ(2d)`.
pub fn ln_gegenbauer_at_one(m: u64, d: f64) -> f64 {
    let m = m as f64;
    log_gamma_unchecked(m + 2.0 * d) - log_gamma_unchecked(m + 1.0) - log_gamma_unchecked(2.0 * d)
}
