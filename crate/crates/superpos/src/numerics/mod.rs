//! Numerics core: adaptive Gauss–Kronrod quadrature, semi-infinite integrals
//! with certified tail bounds, winding numbers by contour phase tracking, and
//! the smooth compactly supported bump with its Fourier/Mellin transforms.

mod bump;
mod quad;
mod winding;

pub use bump::{bump_transforms, SmoothBump};
pub use quad::{
    integrate, integrate_complex, integrate_semiinfinite, integrate_with_floor, DecayHint,
    QuadValue, QuadratureResult,
};
pub use winding::{winding_number, WindingResult};
