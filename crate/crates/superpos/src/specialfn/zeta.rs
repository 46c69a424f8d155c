//! Riemann zeta on the complex plane by Euler–Maclaurin summation, plus the
//! pole-subtracted variant `ζ(s) − 1/(s−1)` that stays smooth through s = 1.

use num_complex::Complex64;

use crate::specialfn::gamma::gamma;
use crate::{Error, Result};

/// B_{2k} / (2k)! for the Euler–Maclaurin correction terms.
const EM_COEF: [f64; 12] = [
    8.333333333333333e-2,     // B2/2!
    -1.3888888888888889e-3,   // B4/4!
    3.306878306878307e-5,     // B6/6!
    -8.267195767195768e-7,    // B8/8!
    2.08767569878681e-8,      // B10/10!
    -5.284190138687493e-10,   // B12/12!
    1.3382536530684679e-11,   // B14/14!
    -3.389680296322583e-13,   // B16/16!
    8.586062056277845e-15,    // B18/18!
    -2.174868698558062e-16,   // B20/20!
    5.50900282836023e-18,     // B22/22!
    -1.3954464685812522e-19,  // B24/24!
];

/// `(e^z − 1)/z`, stable near 0.
fn expm1_over(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        // 1 + z/2 + z²/6 + z³/24 (next term ~ 4e−19 at |z| = 1e−4)
        Complex64::new(1.0, 0.0) + z * 0.5 + z * z / 6.0 + z * z * z / 24.0
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Core Euler–Maclaurin evaluation for `Re s > −1`; `subtract_pole` replaces
/// `N^{1−s}/(s−1)` by `(N^{1−s}−1)/(s−1)` computed without cancellation.
fn euler_maclaurin(s: Complex64, subtract_pole: bool, terms: Option<(usize, usize)>) -> Complex64 {
    let (n, j) = terms.unwrap_or_else(|| {
        let n = 25 + (1.1 * s.im.abs()).ceil() as usize;
        (n, EM_COEF.len())
    });
    let nf = n as f64;

    let mut sum = Complex64::new(0.0, 0.0);
    for m in 1..n {
        sum += (-s * (m as f64).ln()).exp();
    }

    let ln_n = nf.ln();
    sum += if subtract_pole {
        // (N^{1−s} − 1)/(s−1) = −ln N · (e^{(1−s)ln N} − 1)/((1−s) ln N)
        -ln_n * expm1_over((Complex64::new(1.0, 0.0) - s) * ln_n)
    } else {
        ((Complex64::new(1.0, 0.0) - s) * ln_n).exp() / (s - 1.0)
    };

    let n_pow_ms = (-s * ln_n).exp();
    sum += n_pow_ms * 0.5;

    // Σ_k B_{2k}/(2k)! · N^{1−s−2k} · (s)(s+1)···(s+2k−2)
    let mut rising = s; // ∏_{i=0}^{2k−2}(s+i), updated incrementally
    let mut npow = n_pow_ms / nf; // N^{−s−1} → N^{1−s−2k} after multiplying N²... track directly
    // npow currently = N^{−s−1}; we need N^{1−s−2k} = N^{−s−1} · N^{2−2k}.
    // For k = 1 that's N^{−s−1}·N⁰ = npow; each further k divides by N².
    for (k, coef) in EM_COEF.iter().enumerate().take(j) {
        if k > 0 {
            // ∏_{i=0}^{2k−2}(s+i) gains the factors (s+2k−3)(s+2k−2)
            let base = 2.0 * (k + 1) as f64;
            rising *= (s + (base - 3.0)) * (s + (base - 2.0));
            npow /= nf * nf;
        }
        sum += *coef * npow * rising;
    }
    sum
}

/// `ζ(s)`.  Functional-equation reflection is applied for `Re s < −0.5`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::ZetaPole);
    }
    if !s.is_finite() {
        return Err(Error::OutOfRange(format!("zeta at non-finite {s}")));
    }
    if s.re < -0.5 {
        // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
        let pi = std::f64::consts::PI;
        let one_minus = Complex64::new(1.0, 0.0) - s;
        let pref = (s * std::f64::consts::LN_2).exp()
            * ((s - 1.0) * pi.ln()).exp()
            * (s * (pi / 2.0)).sin();
        return Ok(pref * gamma(one_minus)? * zeta(one_minus)?);
    }
    Ok(euler_maclaurin(s, false, None))
}

/// `ζ(s) − 1/(s−1)`: entire near `s = 1`, equal to Euler's γ at `s = 1`.
pub fn zeta_minus_pole(s: Complex64) -> Result<Complex64> {
    if !s.is_finite() {
        return Err(Error::OutOfRange(format!("zeta_minus_pole at non-finite {s}")));
    }
    if s.re < -0.5 {
        return Ok(zeta(s)? - 1.0 / (s - 1.0));
    }
    Ok(euler_maclaurin(s, true, None))
}
