//! Special functions: complex gamma and zeta, incomplete gamma (real and
//! complex order), integer-order Bessel J, the imaginary-order Voronoi
//! kernels, multiplicative arithmetic tables, and the smooth AFE cutoff.

mod arith;
mod bessel;
mod bessel_imag;
mod cutoff;
mod gamma;
mod incgamma;
mod zeta;

pub use arith::{divisor_eta, kloosterman, ArithmeticTable};
pub use bessel::{bessel_j, bessel_j_upto};
pub use bessel_imag::{bessel_imag_order, j_plus, k_plus, modified_k_imag};
pub use cutoff::{mellin_h, smooth_h};
pub use gamma::{gamma, ln_gamma};
pub use incgamma::{incomplete_gamma_upper, upper_gamma_complex};
pub use zeta::{zeta, zeta_minus_pole};
