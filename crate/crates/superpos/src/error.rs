//! Failure modes shared across the crate.

use num_complex::Complex64;

/// Everything that can go wrong in a computation.  Numeric failures carry
/// enough context (partial values, budgets, locations) to diagnose them
/// without rerunning.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("quadrature did not converge after {panels} panels (partial {partial:.6e}, error estimate {error_estimate:.3e})")]
    NoConvergence {
        partial: f64,
        error_estimate: f64,
        panels: u32,
    },

    #[error("integrand returned a non-finite value at x = {x:.17e}")]
    NonFinite { x: f64 },

    #[error("tail bound unverifiable within budget (estimate {estimate:.3e}, needed {needed:.3e})")]
    TailUnverifiable { estimate: f64, needed: f64 },

    #[error("function value vanished or was non-finite on the contour at {at}")]
    ContourValue { at: Complex64 },

    #[error("contour passes too close to a zero: min |φ| = {min_abs:.3e} < {floor:.3e}")]
    ContourTooCloseToZero { min_abs: f64, floor: f64 },

    #[error("accumulated phase is not an integer multiple of 2π: {turns:.6} turns")]
    NonIntegerWinding { turns: f64 },

    #[error("phase-tracking budget exhausted after {samples} contour samples")]
    WindingBudget { samples: usize },

    #[error("gamma pole at {z}")]
    GammaPole { z: Complex64 },

    #[error("zeta pole at s = 1")]
    ZetaPole,

    #[error("continued fraction for Γ({a}, {x}) did not converge")]
    IncGammaNoConvergence { a: f64, x: f64 },

    #[error("parameter out of supported range: {0}")]
    OutOfRange(String),

    #[error("weight {weight} has no cusp forms")]
    EmptySpace { weight: u32 },

    #[error("repeated T2 eigenvalue in weight {weight} (gap {gap:.3e} relative)")]
    RepeatedEigenvalue { weight: u32, gap: f64 },

    #[error("linear system ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("harmonic-weight residual {residual:.3e} exceeds tolerance {tol:.3e} at weight {weight}")]
    WeightResidual { weight: u32, residual: f64, tol: f64 },

    #[error("derivative order {order}: Cauchy radii disagree ({first:.6e} vs {second:.6e})")]
    RadiiDisagree { order: u32, first: f64, second: f64 },

    #[error("derivative order {order} ambiguous: normalized size {size:.3e} inside the dead band")]
    DerivativeAmbiguous { order: u32, size: f64 },

    #[error("series truncation needs {required} coefficients but only {available} are available")]
    InsufficientCoefficients { required: usize, available: usize },

    #[error("V(u, v) evaluated on the singular path u + iv = 0")]
    SingularPath,

    #[error("log of nonpositive value {value:.6e} in {context}")]
    LogNonPositive { value: f64, context: &'static str },

    #[error("{0}")]
    Invalid(String),
}
