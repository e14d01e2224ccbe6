use crate::error::{Error, Result};

/// Largest Gegenbauer parameter accepted; keeps `C_m^d(1) ~ m^{2d-1}` inside
/// double range for `m <= 10^6`.
pub const MAX_GEGENBAUER_D: f64 = 10.0;

fn check(d: f64, t: f64) -> Result<()> {
    if !d.is_finite() || d <= 0.0 || d > MAX_GEGENBAUER_D {
        return Err(Error::Domain(format!(
            "gegenbauer parameter must satisfy 0 < d <= {MAX_GEGENBAUER_D}, got {d}"
        )));
    }
    if !t.is_finite() || t.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "gegenbauer argument must lie in [-1, 1], got {t}"
        )));
    }
    Ok(())
}

/// `C_m^d(t)` by the forward three-term recurrence.
pub fn gegenbauer_c(m: u64, d: f64, t: f64) -> Result<f64> {
    check(d, t)?;
    let mut prev = 1.0;
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * d * t;
    for k in 2..=m {
        let next = step(k, d, t, cur, prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `[C_0^d(t), ..., C_{max_m}^d(t)]`.
pub fn gegenbauer_sequence(max_m: usize, d: f64, t: f64) -> Result<Vec<f64>> {
    check(d, t)?;
    let mut out = Vec::with_capacity(max_m + 1);
    out.push(1.0);
    if max_m == 0 {
        return Ok(out);
    }
    out.push(2.0 * d * t);
    for k in 2..=max_m {
        let next = step(k as u64, d, t, out[k - 1], out[k - 2]);
        out.push(next);
    }
    Ok(out)
}

#[inline]
fn step(k: u64, d: f64, t: f64, c1: f64, c2: f64) -> f64 {
    let kf = k as f64;
    (2.0 * t * (kf + d - 1.0) * c1 - (kf + 2.0 * d - 2.0) * c2) / kf
}
