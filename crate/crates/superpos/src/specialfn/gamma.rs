//! Complex gamma via Stirling's series with Bernoulli corrections, shifted
//! into its region of validity and reflected across Re z = 1/2.

use num_complex::Complex64;

use crate::{Error, Result};

/// Bernoulli coefficients B_{2n} / (2n(2n−1)) of the Stirling series.
const STIRLING: [f64; 10] = [
    8.333333333333333e-2,    // 1/12
    -2.777777777777778e-3,   // −1/360
    7.936507936507937e-4,    // 1/1260
    -5.952380952380953e-4,   // −1/1680
    8.417508417508417e-4,    // 1/1188
    -1.9175269175269175e-3,  // −691/360360
    6.410256410256410e-3,    // 1/156
    -2.955065359477124e-2,   // −3617/122400
    1.7964437236883057e-1,   // 43867/244188
    -1.3924322169059011,     // −174611/125400
];

const LN_2PI_HALF: f64 = 0.9189385332046727; // ln(2π)/2
const SHIFT_RADIUS: f64 = 16.0;

fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    let mut series = Complex64::new(0.0, 0.0);
    let z2 = z * z;
    let mut zp = z;
    for c in STIRLING {
        series += c / zp;
        zp *= z2;
    }
    (z - 0.5) * z.ln() - z + LN_2PI_HALF + series
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    if z.im.abs() <= 1.0 {
        return (z * pi).sin().ln();
    }
    if z.im > 0.0 {
        // sin(πz) = (i/2) e^{−iπz} (1 − e^{2iπz}), |e^{2iπz}| = e^{−2π Im z}.
        let one_m = Complex64::new(1.0, 0.0) - (Complex64::new(0.0, 2.0 * pi) * z).exp();
        Complex64::new(0.0, 1.0).ln() - std::f64::consts::LN_2
            + Complex64::new(0.0, -pi) * z
            + one_m.ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Principal-branch `ln Γ(z)` (continuous on the cut plane for `Re z ≥ 1/2`;
/// after reflection the imaginary part may differ from the principal branch
/// by multiples of 2π, which `exp` cannot see).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(Error::OutOfRange(format!("ln_gamma at non-finite {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole { z });
    }
    if z.re < 0.5 {
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz).
        let pi: f64 = std::f64::consts::PI;
        return Ok(pi.ln() - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z)?);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < SHIFT_RADIUS {
        acc += w.ln();
        w += 1.0;
    }
    Ok(stirling_ln_gamma(w) - acc)
}

/// `Γ(z)`; errors at the poles.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integers_factorial() {
        for (n, f) in [(1u32, 1.0), (2, 1.0), (3, 2.0), (5, 24.0), (10, 362880.0)] {
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!((g.re - f).abs() < 1e-12 * f, "Γ({n}) = {g}");
            assert!(g.im.abs() < 1e-12 * f);
        }
    }

    #[test]
    fn half_integer() {
        let g = gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn recurrence_complex() {
        // Γ(z+1) = zΓ(z) at a scattering of points, including large |Im|.
        for z in [c(0.3, 0.7), c(2.5, -4.0), c(0.75, 120.0), c(60.0, 35.0)] {
            let a = gamma(z + 1.0).unwrap();
            let b = gamma(z).unwrap() * z;
            assert!((a - b).norm() < 1e-12 * a.norm(), "z = {z}: {a} vs {b}");
        }
        // At |Im z| = 900 the value itself underflows f64 (|Γ| ≈ e^{−1413}),
        // so check the recurrence in log form, modulo the 2πi branch.
        let z = c(1.0, -900.0);
        let d = ln_gamma(z + 1.0).unwrap() - ln_gamma(z).unwrap() - z.ln();
        let turns = d.im / std::f64::consts::TAU;
        assert!(d.re.abs() < 1e-9, "log recurrence real part {:.3e}", d.re);
        assert!((turns - turns.round()).abs() < 1e-9, "branch offset {turns}");
    }

    #[test]
    fn reflection_formula() {
        let pi = std::f64::consts::PI;
        for z in [c(0.3, 0.4), c(-1.2, 2.0), c(-5.5, -0.3), c(0.1, 30.0)] {
            let lhs = gamma(z).unwrap() * gamma(Complex64::new(1.0, 0.0) - z).unwrap();
            let rhs = pi / (z * pi).sin();
            assert!((lhs - rhs).norm() < 1e-11 * rhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn known_value_gamma_i() {
        // |Γ(i)|² = π / sinh(π).
        let g = gamma(c(0.0, 1.0)).unwrap();
        let expect = (std::f64::consts::PI / std::f64::consts::PI.sinh()).sqrt();
        assert!((g.norm() - expect).abs() < 1e-13);
    }

    #[test]
    fn known_value_large_imaginary() {
        // |Γ(1/2 + it)| = sqrt(π / cosh(πt)); use the log to avoid underflow.
        let t = 40.0;
        let lg = ln_gamma(c(0.5, t)).unwrap();
        let expect = 0.5 * (std::f64::consts::PI.ln() - (std::f64::consts::PI * t).cosh().ln());
        assert!((lg.re - expect).abs() < 1e-11 * expect.abs());
    }

    #[test]
    fn poles_detected() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma(c(n, 0.0)), Err(Error::GammaPole { .. })));
        }
    }

    #[test]
    fn duplication_formula() {
        // Γ(z)Γ(z+1/2) = 2^{1−2z} √π Γ(2z).
        for z in [c(0.7, 0.2), c(3.0, -1.5), c(0.9, 8.0)] {
            let lhs = gamma(z).unwrap() * gamma(z + 0.5).unwrap();
            let rhs = (Complex64::new(2.0f64.ln(), 0.0) * (1.0 - 2.0 * z)).exp()
                * std::f64::consts::PI.sqrt()
                * gamma(z * 2.0).unwrap();
            assert!((lhs - rhs).norm() < 1e-11 * rhs.norm(), "z = {z}");
        }
    }
}
