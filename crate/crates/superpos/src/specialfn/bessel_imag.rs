//! Bessel kernels of purely imaginary order ν = 2it.
//!
//! The Voronoi summation formula for the coefficients η_it(n) involves two
//! real kernels built from Bessel functions of imaginary order:
//!
//! ```text
//! J⁺(t, x) = -π / sin(πν/2) · (J_ν(x) - J_{-ν}(x))      (ν = 2it)
//! K⁺(t, x) = 4 cos(πν/2) · K_ν(x) = 4 cosh(πt) · K_{2it}(x)
//! ```
//!
//! Both are real and even in t. No library-grade implementation of
//! imaginary-order Bessel functions is available, and the power series
//! suffers fatal cancellation already near x ≈ 40, so the kernels are
//! computed from Schläfli's integral representations:
//!
//! ```text
//! J⁺(t, x) = -2 [ ∫₀^π  sinh(2tθ)/sinh(πt) · sin(x sin θ) dθ
//!                 - 2 cosh(πt) ∫₀^∞ e^{-x sinh u} cos(2tu) du ]
//! K_{2it}(x) =    ∫₀^∞ e^{-x cosh u} cos(2tu) du
//! ```
//!
//! The sinh-ratio weight is stable for every t ≠ 0 and tends to 2θ/π as
//! t → 0, so the removable singularity of the defining combination needs no
//! blending; at t = 0 exactly, J⁺ reduces to -2π·Y₀(x). The two J⁺ integrals
//! individually grow like e^{π|t|} while their combination stays O(1), which
//! bounds the achievable accuracy: full precision for |t| ≤ 2 (every use in
//! this crate), ~1e-9 near |t| = 5, ~1e-3 at the domain edge |t| = 10.
//!
//! For x ≥ 50 the oscillatory integral is replaced by the Hankel-type
//! expansion of the defining combination,
//!
//! ```text
//! J⁺(t, x) = -2 √(2π/x) [ P sin(x - π/4) + Q cos(x - π/4) ],
//! P = Σ_j (-1)^j a_{2j} x^{-2j},   Q = Σ_j (-1)^j a_{2j+1} x^{-2j-1},
//! a_j = ∏_{i=1}^{j} (4ν² - (2i-1)²) / (j! 8^j),   4ν² = -16t²,
//! ```
//!
//! summed to its smallest term. This is the expansion the Voronoi dual-sum
//! tails rely on; it agrees with the integral representation to ~1e-12 or
//! better across the seam.

use crate::numerics::integrate;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Argument above which J⁺ switches to the large-x expansion.
const ASYMPTOTIC_CUTOFF: f64 = 50.0;
/// Truncation depth of the monotone integrals: e^{-60} below the integrand scale.
const TAIL_DEPTH: f64 = 60.0;
const QUAD_TOL: f64 = 1e-13;

fn check_domain(t: f64, x: f64) -> Result<()> {
    if !(x > 0.0 && x <= 4.0e3) {
        return Err(Error::OutOfRange(format!(
            "imaginary-order Bessel argument x = {x} outside (0, 4000]"
        )));
    }
    if !(t.abs() <= 10.0) {
        return Err(Error::OutOfRange(format!(
            "imaginary-order Bessel parameter t = {t} outside [-10, 10]"
        )));
    }
    Ok(())
}

/// K_{2it}(x) = ∫₀^∞ e^{-x cosh u} cos(2tu) du, real and positive-scaled by
/// e^{-x}. Underflows to zero (correctly, in f64 terms) once x ≳ 745.
pub fn modified_k_imag(t: f64, x: f64) -> Result<f64> {
    check_domain(t, x)?;
    let u_max = (1.0 + TAIL_DEPTH / x).acosh();
    let r = integrate(
        |u| (-x * u.cosh()).exp() * (2.0 * t * u).cos(),
        0.0,
        u_max,
        QUAD_TOL,
    )?;
    Ok(r.value)
}

/// K⁺(t, x) = 4 cosh(πt) K_{2it}(x).
pub fn k_plus(t: f64, x: f64) -> Result<f64> {
    Ok(4.0 * (PI * t).cosh() * modified_k_imag(t, x)?)
}

/// J⁺(t, x) = -π/sin(πit) · (J_{2it}(x) - J_{-2it}(x)), evaluated without
/// complex-order Bessel functions. At t = 0 this is the removable limit
/// -2π·Y₀(x).
pub fn j_plus(t: f64, x: f64) -> Result<f64> {
    check_domain(t, x)?;
    if x >= ASYMPTOTIC_CUTOFF {
        jplus_asymptotic(t, x)
    } else {
        jplus_schlafli(t, x)
    }
}

/// Both Voronoi kernels at once.
pub fn bessel_imag_order(t: f64, x: f64) -> Result<(f64, f64)> {
    Ok((j_plus(t, x)?, k_plus(t, x)?))
}

fn jplus_schlafli(t: f64, x: f64) -> Result<f64> {
    // The f64 ratio sinh(2tθ)/sinh(πt) is stable down to the smallest
    // nonzero t (both factors are then in their linear range), so only
    // exact zero takes the limit branch.
    let arch = if t == 0.0 {
        integrate(
            |th: f64| (2.0 * th / PI) * (x * th.sin()).sin(),
            0.0,
            PI,
            QUAD_TOL,
        )?
    } else {
        let denom = (PI * t).sinh();
        integrate(
            |th: f64| ((2.0 * t * th).sinh() / denom) * (x * th.sin()).sin(),
            0.0,
            PI,
            QUAD_TOL,
        )?
    };
    let u_max = (TAIL_DEPTH / x).asinh();
    let steep = integrate(
        |u: f64| (-x * u.sinh()).exp() * (2.0 * t * u).cos(),
        0.0,
        u_max,
        QUAD_TOL,
    )?;
    Ok(-2.0 * (arch.value - 2.0 * (PI * t).cosh() * steep.value))
}

fn jplus_asymptotic(t: f64, x: f64) -> Result<f64> {
    let four_nu_sq = -16.0 * t * t;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut c = 1.0_f64; // a_j / x^j
    let mut prev_mag = f64::INFINITY;
    let mut truncation = f64::INFINITY;
    for j in 0..40usize {
        let mag = c.abs();
        if mag >= prev_mag {
            truncation = prev_mag; // smallest-term cutoff of the divergent tail
            break;
        }
        if mag < 1e-17 {
            truncation = mag;
            break;
        }
        let signed = if (j / 2) % 2 == 0 { c } else { -c };
        if j % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        prev_mag = mag;
        let odd = (2 * j + 1) as f64;
        c *= (four_nu_sq - odd * odd) / ((j + 1) as f64 * 8.0 * x);
        truncation = c.abs();
    }
    let envelope = 2.0 * (2.0 * PI / x).sqrt();
    let phase = x - PI / 4.0;
    let value = -envelope * (p * phase.sin() + q * phase.cos());
    if truncation > 1e-9 {
        return Err(Error::NoConvergence {
            partial: value,
            error_estimate: envelope * truncation,
            panels: 0,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Frozen values computed from the defining combinations with mpmath at
    // 40 digits: -pi/sin(pi*i*t)*(J_{2it}(x) - J_{-2it}(x)) and Re K_{2it}(x).

    #[test]
    fn t_zero_is_minus_two_pi_y0() {
        assert_relative_eq!(
            j_plus(0.0, 0.5).unwrap(),
            2.7929935751354168,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(0.0, 5.0).unwrap(),
            1.9384734099706669,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(0.0, 20.0).unwrap(),
            -0.39358247750568097,
            max_relative = 1e-12
        );
    }

    #[test]
    fn jplus_quadrature_range() {
        assert_relative_eq!(
            j_plus(0.3, 10.0).unwrap(),
            -0.37706256297894071,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(1.0, 3.0).unwrap(),
            -2.6433108544673788,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(0.7, 12.3).unwrap(),
            1.294904306812672,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(2.0, 25.0).unwrap(),
            0.94294616780626234,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            j_plus(0.5, 49.0).unwrap(),
            0.63086818266606575,
            max_relative = 1e-12
        );
    }

    #[test]
    fn jplus_large_t_amplification_stays_bounded() {
        // The two Schläfli integrals each reach ~e^{5π} ≈ 6.6e6 here; the
        // combination is O(1), so ~7 digits is the honest expectation.
        assert_relative_eq!(
            j_plus(5.0, 30.0).unwrap(),
            -0.5842969422419151,
            max_relative = 1e-7
        );
    }

    #[test]
    fn jplus_asymptotic_range() {
        assert_relative_eq!(
            j_plus(0.3, 50.0).unwrap(),
            0.6173964923704514,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(1.0, 60.0).unwrap(),
            -0.31646164344882322,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(2.0, 80.0).unwrap(),
            0.30380381602133519,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(0.3, 100.0).unwrap(),
            0.48556120101271749,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(0.5, 1000.0).unwrap(),
            -0.029553105835523987,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(0.05, 1200.0).unwrap(),
            0.110976989893192502,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(0.3, 2000.0).unwrap(),
            -0.102841462682730195,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            j_plus(1.0, 3500.0).unwrap(),
            0.042121652599207932,
            max_relative = 1e-12
        );
    }

    #[test]
    fn representation_seam_agrees() {
        for &t in &[0.0, 0.5, 2.0] {
            for &x in &[50.0, 55.0, 80.0] {
                let series = jplus_asymptotic(t, x).unwrap();
                let quad = jplus_schlafli(t, x).unwrap();
                assert_relative_eq!(series, quad, max_relative = 5e-10);
            }
        }
    }

    #[test]
    fn removable_singularity_is_smooth() {
        let a = j_plus(1e-6, 5.0).unwrap();
        let b = j_plus(1e-4, 5.0).unwrap();
        assert!((a - b).abs() < 1e-6);
        let exact = j_plus(0.0, 5.0).unwrap();
        let near = j_plus(1e-7, 5.0).unwrap();
        assert!((exact - near).abs() < 1e-10);
    }

    #[test]
    fn kernels_are_even_in_t() {
        for &(t, x) in &[(0.4, 3.0), (1.3, 17.0), (2.2, 60.0)] {
            assert_relative_eq!(
                j_plus(t, x).unwrap(),
                j_plus(-t, x).unwrap(),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                k_plus(t, x).unwrap(),
                k_plus(-t, x).unwrap(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn modified_k_values() {
        assert_relative_eq!(
            modified_k_imag(0.0, 1.0).unwrap(),
            0.42102443824070833, // K_0(1)
            max_relative = 1e-13
        );
        assert_relative_eq!(
            modified_k_imag(0.3, 1.0).unwrap(),
            0.36868651291554496,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            modified_k_imag(1.0, 0.5).unwrap(),
            0.016502018949481443,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            modified_k_imag(2.0, 10.0).unwrap(),
            8.2140857733558668e-6,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            modified_k_imag(1.0, 3.0).unwrap(),
            0.019156728326977343,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            modified_k_imag(0.5, 35.0).unwrap(),
            1.312414247049608e-16,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            modified_k_imag(0.3, 100.0).unwrap(),
            4.6482952016416945e-45,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            modified_k_imag(5.0, 2.0).unwrap(),
            1.1735704221220612e-7,
            max_relative = 1e-6
        );
    }

    #[test]
    fn k_plus_values() {
        assert_relative_eq!(
            k_plus(0.0, 2.0).unwrap(),
            0.45557549099813374, // 4 K_0(2)
            max_relative = 1e-13
        );
        assert_relative_eq!(
            k_plus(1.0, 3.0).unwrap(),
            0.88825559871272364,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            k_plus(0.3, 100.0).unwrap(),
            2.7480661107183363e-44,
            max_relative = 1e-10
        );
    }

    #[test]
    fn k_plus_large_x_normalization() {
        // K⁺(t,x) e^x √(2x/π) / (4 cosh(πt)) → 1; at x = 100, t = 0.3 the
        // true ratio is 0.996969685…, well within the 0.02 window.
        let x = 100.0;
        let t = 0.3;
        let ratio = k_plus(t, x).unwrap() * x.exp() * (2.0 * x / PI).sqrt()
            / (4.0 * (PI * t).cosh());
        assert!((ratio - 1.0).abs() < 0.02, "ratio = {ratio}");
        assert_relative_eq!(ratio, 0.99696968539095693, max_relative = 1e-10);
    }

    #[test]
    fn domain_checks() {
        assert!(j_plus(0.3, 0.0).is_err());
        assert!(j_plus(0.3, 4500.0).is_err());
        assert!(j_plus(11.0, 5.0).is_err());
        assert!(modified_k_imag(0.3, -1.0).is_err());
        assert!(bessel_imag_order(0.3, f64::NAN).is_err());
    }

    #[test]
    fn pair_matches_parts() {
        let (j, k) = bessel_imag_order(0.7, 9.0).unwrap();
        assert_eq!(j, j_plus(0.7, 9.0).unwrap());
        assert_eq!(k, k_plus(0.7, 9.0).unwrap());
    }
}
