//! Certification of super-positivity for L-functions of level-1 holomorphic
//! Hecke cusp forms, plus desk-scale numerical validation of the analytic
//! machinery behind the proof.
//!
//! A completed L-function `Λ(s, f)` is *super-positive* when every derivative
//! `Λ^(k)(σ, f)` is nonnegative at the central point `σ = 1/2` and strictly
//! positive for `σ > 1/2`.  Zero-freeness of `Λ` on the open triangle
//! `{ 1/2 < σ < 1, |t| < σ − 1/2 }` implies super-positivity, so the property
//! reduces to a winding-number computation on explicit contours.  This crate:
//!
//! * builds exact Hecke eigenform bases of level 1 ([`eigenforms`]) from
//!   integer q-expansions,
//! * evaluates `Λ(s, f)` and its derivatives anywhere in the critical strip
//!   by incomplete-gamma series ([`lfunction`]),
//! * certifies zero-freeness of the triangle and emits a derivative-by-
//!   derivative positivity report ([`certify`]),
//! * validates the Petersson formula, Voronoi summation, a smoothed Bessel
//!   average, and Dirichlet-series identities at concrete parameters
//!   ([`identities`]),
//! * evaluates the mollified second moment's main terms and the mollifier's
//!   Euler products ([`mollifier`]),
//! * reproduces the zero-density constants of the averaged argument — the
//!   `N_0 ≤ 0.3613` bound, the `N_j` ladder, and the `≥ 27%` super-positivity
//!   proportion ([`constants`]).
//!
//! Everything rests on a small numerics core ([`numerics`]) — adaptive
//! Gauss–Kronrod panels, winding numbers with phase tracking, a smooth bump
//! with its transforms — and on special functions ([`specialfn`]): complex
//! gamma and zeta, incomplete gamma, Bessel `J_n`, and the imaginary-order
//! kernels `J^+_{2it}`, `K^+_{2it}` of Voronoi summation.
//!
//! Entry points are ordinary library calls; see `examples/` for one runnable
//! driver per capability.

pub mod certify;
pub mod constants;
pub mod eigenforms;
mod error;
pub mod identities;
pub mod lfunction;
pub mod mollifier;
pub mod numerics;
pub mod report;
pub mod specialfn;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
