//! Smooth partition-of-unity cutoff H and its Mellin transform H̃.
//!
//! The approximate functional equation needs a weight H with
//! H(x) = 1 on [0, 1/2], H(x) = 0 on [2, ∞), and the exact symmetry
//! H(x) + H(1/x) = 1. The concrete choice here is H(x) = ψ(log₂ x) on
//! [1/2, 2] with
//!
//! ```text
//! ψ(u) = 1 / (1 + exp(2u / (1 - u²)))   on (-1, 1),
//! ```
//!
//! which satisfies ψ(u) + ψ(-u) = 1 identically and is C^∞ with all
//! derivatives vanishing at u = ±1 (so H is globally smooth).
//!
//! The Mellin transform H̃(s) = ∫₀^∞ H(y) y^{s-1} dy converges for
//! Re s > 0 and continues meromorphically with a single simple pole at
//! s = 0 of residue 1 via the plateau split
//!
//! ```text
//! H̃(s) = (1/2)^s / s  +  ∫_{1/2}^{2} H(y) y^{s-1} dy,
//! ```
//!
//! and the symmetry of H forces H̃ to be odd: H̃(s) + H̃(-s) = 0.

use crate::numerics::integrate_complex;
use crate::{Error, Result};
use num_complex::Complex64;

const QUAD_TOL: f64 = 1e-13;

/// The cutoff H: 1 on [0, 1/2], 0 on [2, ∞), smooth monotone in between.
pub fn smooth_h(x: f64) -> f64 {
    if x <= 0.5 {
        return 1.0;
    }
    if x >= 2.0 {
        return 0.0;
    }
    let u = x.log2();
    let a = 2.0 * u / (1.0 - u * u);
    // exp overflows past ~709; the true value is already 0/1 to f64 there.
    if a > 700.0 {
        0.0
    } else if a < -700.0 {
        1.0
    } else {
        1.0 / (1.0 + a.exp())
    }
}

/// H̃(s) by quadrature over the transition band plus the closed-form
/// plateau contribution; meromorphic in s with its only pole at s = 0.
pub fn mellin_h(s: Complex64) -> Result<Complex64> {
    if s.norm() < 1e-14 {
        return Err(Error::Invalid(format!(
            "Mellin transform of the cutoff has its pole at s = 0 (got {s})"
        )));
    }
    let plateau = (-s * std::f64::consts::LN_2).exp() / s;
    let band = integrate_complex(
        |y: f64| ((s - 1.0) * y.ln()).exp() * smooth_h(y),
        0.5,
        2.0,
        QUAD_TOL,
    )?;
    Ok(plateau + band.value)
}
