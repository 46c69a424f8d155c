//! Integer-order Bessel `J_n(x)` by Miller's backward recurrence with the
//! `J_0 + 2ΣJ_{2m} = 1` normalization.  Computes whole columns at once, which
//! is what the weight-averaged trace-formula sums need.

use crate::{Error, Result};

/// All of `J_0(x) … J_{n_max}(x)` for `x ≥ 0`.
///
/// Backward recurrence is stable downward in order; the starting order sits
/// far enough above `max(n_max, x)` that the seeded garbage has decayed by
/// the time it reaches the requested range.
pub fn bessel_j_upto(n_max: usize, x: f64) -> Result<Vec<f64>> {
    if !(x >= 0.0 && x <= 2e5) {
        return Err(Error::OutOfRange(format!("bessel_j argument x = {x}")));
    }
    if n_max > 100_000 {
        return Err(Error::OutOfRange(format!("bessel_j order {n_max}")));
    }
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    // For tiny x the recurrence underflows before normalizing; the series
    // J_n = (x/2)^n/n! (1 − (x/2)²/(n+1) + …) is exact to f64 there.
    if x < 1e-6 {
        let mut out = vec![0.0; n_max + 1];
        let h = 0.5 * x;
        let mut lead = 1.0;
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = lead * (1.0 - h * h / (n as f64 + 1.0));
            lead *= h / (n as f64 + 1.0);
            if lead == 0.0 {
                break;
            }
        }
        return Ok(out);
    }

    let top = {
        let base = (n_max as f64).max(x);
        (base + 15.0 * base.sqrt() + 60.0).ceil() as usize
    };
    let mut col = vec![0.0f64; top + 2];
    col[top + 1] = 0.0;
    col[top] = 1e-300;

    let mut norm = 0.0f64; // J_0 + 2 Σ J_{2m}
    for m in (1..=top).rev() {
        col[m - 1] = (2.0 * m as f64 / x) * col[m] - col[m + 1];
        if col[m - 1].abs() > 1e280 {
            // rescale everything accumulated so far
            let s = 1e-280;
            for v in col[m - 1..].iter_mut() {
                *v *= s;
            }
            norm *= s;
        }
        if (m - 1) % 2 == 0 && m - 1 > 0 {
            norm += col[m - 1];
        }
    }
    let norm = col[0] + 2.0 * norm;
    let inv = 1.0 / norm;
    let mut out = col;
    out.truncate(n_max + 1);
    for v in &mut out {
        *v *= inv;
    }
    Ok(out)
}

/// Single value `J_n(x)`.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    Ok(bessel_j_upto(n, x)?[n])
}
