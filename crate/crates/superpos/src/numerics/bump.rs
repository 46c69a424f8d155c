//! The smooth averaging weight Φ: a C^∞ bump supported on (1, 2), together
//! with the transforms the moment computations need — Fourier, Mellin, and
//! the half-integral "check" transform from the Bessel-average identity.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::numerics::quad::{integrate_complex, integrate_with_floor, WGK, XGK};
use crate::Result;

/// `Φ(x) = exp(−1/((x−1)(2−x)))` on `(1, 2)`, zero elsewhere.  All derivatives
/// vanish at the endpoints, so sums weighted by `Φ((k−1)/K)` are genuinely
/// smooth averages over weights `k ∈ (K, 2K)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SmoothBump;

impl SmoothBump {
    pub fn new() -> Self {
        SmoothBump
    }

    /// Support of the bump.
    pub fn support(&self) -> (f64, f64) {
        (1.0, 2.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 1.0 || x >= 2.0 {
            return 0.0;
        }
        (-1.0 / ((x - 1.0) * (2.0 - x))).exp()
    }

    /// Analytic continuation off the real axis; needed for Cauchy-circle
    /// derivatives.  Only trustworthy well away from the essential
    /// singularities at 1 and 2.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        (-1.0 / ((z - 1.0) * (Complex64::new(2.0, 0.0) - z))).exp()
    }

    /// `Φ^(order)(x)` by trapezoid Cauchy integration on a circle that stays
    /// clear of the endpoint singularities.
    pub fn deriv(&self, x: f64, order: u32) -> f64 {
        if order == 0 {
            return self.eval(x);
        }
        if x <= 1.0 || x >= 2.0 {
            return 0.0;
        }
        let r = 0.45 * (x - 1.0).min(2.0 - x);
        let n = 128.max(8 * order as usize);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let z = Complex64::new(x + r * th.cos(), r * th.sin());
            acc += self.eval_complex(z) * Complex64::from_polar(1.0, -(order as f64) * th);
        }
        let mut fact = 1.0;
        for m in 2..=order as u64 {
            fact *= m as f64;
        }
        (acc / n as f64).re * fact / r.powi(order as i32)
    }

    /// Fourier transform `Φ̂(v) = ∫ Φ(u) e^{−2πiuv} du`.
    pub fn fourier(&self, v: f64) -> Result<Complex64> {
        let r = integrate_complex(
            |u| Complex64::from_polar(self.eval(u), -2.0 * std::f64::consts::PI * u * v),
            1.0,
            2.0,
            1e-12,
        )?;
        Ok(r.value)
    }

    /// The transform `Φ̌(v) = ∫_0^∞ Φ(√u) (2πu)^{−1/2} e^{iuv} du`, evaluated
    /// after `u = w²` as `√(2/π) ∫ Φ(w) e^{ivw²} dw`.
    pub fn check_transform(&self, v: f64) -> Result<Complex64> {
        let r = integrate_complex(
            |w| Complex64::from_polar(self.eval(w), v * w * w),
            1.0,
            2.0,
            1e-12,
        )?;
        Ok(r.value * (2.0 / std::f64::consts::PI).sqrt())
    }

    /// Mellin transform `Φ̃(s) = ∫ Φ(u) u^{s−1} du` (entire in `s`).
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        let r = integrate_complex(
            |u| ((s - 1.0) * u.ln()).exp() * self.eval(u),
            1.0,
            2.0,
            1e-12,
        )?;
        Ok(r.value)
    }

    /// `Φ̂(v)` on a fixed 160-panel composite Kronrod grid.  Absolute error
    /// stays near 1e−17 for v ≤ 240, which is all the moment integral needs:
    /// the true transform is below that floor by v ≈ 100 anyway, and there
    /// it only enters multiplied by v³ ≲ 1e7.
    fn fourier_on_grid(&self, v: f64) -> Complex64 {
        static GRID: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
        let (nodes, weights) = GRID.get_or_init(|| {
            let bump = SmoothBump;
            let panels = 160usize;
            let h = 0.5 / panels as f64;
            let mut nodes = Vec::with_capacity(15 * panels);
            let mut weights = Vec::with_capacity(15 * panels);
            for p in 0..panels {
                let mid = 1.0 + (2 * p + 1) as f64 * h;
                for i in 0..7 {
                    for s in [-1.0, 1.0] {
                        let x = mid + s * h * XGK[i];
                        nodes.push(x);
                        weights.push(h * WGK[i] * bump.eval(x));
                    }
                }
                nodes.push(mid);
                weights.push(h * WGK[7] * bump.eval(mid));
            }
            (nodes, weights)
        });
        let mut re = 0.0;
        let mut im = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            let (s, c) = (-2.0 * std::f64::consts::PI * x * v).sin_cos();
            re += w * c;
            im += w * s;
        }
        Complex64::new(re, im)
    }

    /// `∫_{-∞}^{∞} |v|³ |Φ̂(v)| dv`, the constant in the Bessel-average error
    /// term.  Computed once and cached (the bump is a fixed function).
    ///
    /// `v³|Φ̂(v)|` peaks near v ≈ 4 and is below 1e−14 of the total by
    /// v ≈ 150 (the bump is Gevrey-2, so Φ̂ decays like e^{−c√v}); summing
    /// width-2 blocks until two consecutive ones are negligible captures
    /// the whole mass.  The fixed-grid transform keeps each sample cheap;
    /// its ~1e−17 noise floor bounds the result's accuracy at ~1e−8, far
    /// inside what an error-term constant needs.
    pub fn abs_moment3_fourier(&self) -> Result<f64> {
        static CACHE: OnceLock<f64> = OnceLock::new();
        if let Some(v) = CACHE.get() {
            return Ok(*v);
        }
        let mut total = 0.0f64;
        let mut negligible_run = 0;
        let mut lo = 0.0f64;
        while lo < 240.0 {
            let hi = lo + 2.0;
            let floor = (1e-9 * total).max(1e-14);
            let block = integrate_with_floor(
                |v| v.powi(3) * self.fourier_on_grid(v).norm(),
                lo,
                hi,
                1e-8,
                floor,
            )?;
            total += block.value;
            if hi >= 16.0 && block.value.abs() < 1e-8 * total.abs() {
                negligible_run += 1;
                if negligible_run >= 2 {
                    break;
                }
            } else {
                negligible_run = 0;
            }
            lo = hi;
        }
        let total = 2.0 * total; // |v|³ is even with |Φ̂(−v)| = |Φ̂(v)|
        Ok(*CACHE.get_or_init(|| total))
    }
}

/// Fourier and check transforms at one frequency, as a pair.
pub fn bump_transforms(phi: &SmoothBump, v: f64) -> Result<(Complex64, Complex64)> {
    Ok((phi.fourier(v)?, phi.check_transform(v)?))
}
