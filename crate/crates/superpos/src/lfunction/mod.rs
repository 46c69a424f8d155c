//! The completed L-function Λ(s,f) = (2π)^{−s−(k−1)/2} Γ(s+(k−1)/2) L(s,f):
//! entire, satisfying Λ(s) = ε·Λ(1−s).  Point values come from the
//! incomplete-gamma series (two mirrored sums, tails certified term by term),
//! derivatives from Cauchy circles with a two-radius consistency check, and
//! the approximate-functional-equation weight V lives in [`AfeWeight`].

mod afe;

pub use afe::{afe_weight, l_squared_afe, AfeWeight};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::eigenforms::HeckeEigenform;
use crate::specialfn::{ln_gamma, upper_gamma_complex};
use crate::{Error, Result};

/// Λ(s,f) together with everything point evaluation needs.  The underlying
/// form is consumed; the evaluator is pure and thread-safe.
#[derive(Debug, Clone)]
pub struct CompletedLFunction {
    form: HeckeEigenform,
    series_length: usize,
}

/// One row of a derivative table: Λ^(order)(center), with the disagreement
/// between the two Cauchy radii as its error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeEntry {
    pub order: usize,
    pub value: [f64; 2],
    pub error_estimate: f64,
}

const CAUCHY_NODES: usize = 256;

impl CompletedLFunction {
    pub fn new(form: HeckeEigenform) -> Self {
        let series_length = form.n_coeffs();
        CompletedLFunction { form, series_length }
    }

    pub fn form(&self) -> &HeckeEigenform {
        &self.form
    }

    /// Sign of the functional equation Λ(s) = ε·Λ(1−s).
    pub fn epsilon(&self) -> i32 {
        self.form.epsilon()
    }

    /// Coefficients available to the series.
    pub fn series_length(&self) -> usize {
        self.series_length
    }

    /// The archimedean factor (2π)^{−s−(k−1)/2} Γ(s+(k−1)/2), so that
    /// L(s,f) = Λ(s,f) / gamma_factor(s) is the Dirichlet series Σ λ(n)n^{−s}.
    pub fn gamma_factor(&self, s: Complex64) -> Result<Complex64> {
        let nu = (self.form.weight() - 1) as f64 / 2.0;
        let ln = ln_gamma(s + nu)? - (s + nu) * (2.0 * PI).ln();
        Ok(ln.exp())
    }

    /// Λ(s,f) for |Im s| ≤ 50, with the series tail certified below 10⁻¹³
    /// of the local scale via |λ_f(n)| ≤ τ(n) ≤ n and the bound
    /// Γ(a,x) ≤ x^a e^{−x}/(x−a+1).  The scale is |gamma_factor(s)|, which
    /// captures the e^{−π|t|/2} shrinkage of Λ high in the strip — an
    /// absolute cutoff there would be 10⁵ times the function itself.
    pub fn lambda(&self, s: Complex64) -> Result<Complex64> {
        if !s.is_finite() || s.im.abs() > 50.0 {
            return Err(Error::OutOfRange(format!("lambda at s = {s} (need |Im s| ≤ 50)")));
        }
        let nu = (self.form.weight() - 1) as f64 / 2.0;
        let eps = self.form.epsilon() as f64;
        let a1 = s + nu;
        let a2 = -s + (nu + 1.0);
        let ln2pi = (2.0 * PI).ln();
        let scale = (ln_gamma(a1)?.re - a1.re * ln2pi)
            .exp()
            .max((ln_gamma(a2)?.re - a2.re * ln2pi).exp());
        let cutoff = 5e-14 * scale;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut prev_bound = f64::INFINITY;
        for n in 1.. {
            if n > self.series_length {
                return Err(Error::InsufficientCoefficients {
                    required: n,
                    available: self.series_length,
                });
            }
            let x = 2.0 * PI * n as f64;
            let lnx = x.ln();
            let lnn = (n as f64).ln();
            let t1 = (upper_gamma_complex(a1, x)? - a1 * lnx + nu * lnn).exp();
            let t2 = (upper_gamma_complex(a2, x)? + (s - 1.0 - nu) * lnx + nu * lnn).exp();
            sum += self.form.lambda(n) * (t1 + eps * t2);
            // everything past this index, bounded with the next term's
            // envelope; the envelope decays by e^{−2π} per step once the
            // incomplete gammas are in their exponential regime
            let bound = series_tail_envelope(n + 1, s.re, nu);
            if 2.0 * PI * (n + 1) as f64 > a1.re.max(a2.re) + 3.0
                && bound < cutoff
                && bound < 0.5 * prev_bound
            {
                break;
            }
            prev_bound = bound;
        }
        Ok(sum)
    }

    /// L(s,f) = Λ(s,f) / gamma_factor(s).
    pub fn l_value(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.lambda(s)? / self.gamma_factor(s)?)
    }

    /// Λ^(j)(center) for j = 0..=max_order by a 256-node Cauchy circle of
    /// radius 1/4, cross-checked at radius 1/8.  Orders where the two radii
    /// differ by more than 10⁻⁸ relative (10⁻¹⁴ absolute) are an error —
    /// they signal aliasing or an exhausted series, not usable values.
    ///
    /// At center 1/2 the functional equation pins the node values on the
    /// lower half-circle, so the parity-forced orders vanish exactly.
    pub fn lambda_derivatives(
        &self,
        center: Complex64,
        max_order: usize,
    ) -> Result<Vec<Complex64>> {
        let table = self.derivative_table(center, max_order)?;
        for e in &table {
            let size = (e.value[0].powi(2) + e.value[1].powi(2)).sqrt();
            if e.error_estimate > (1e-8 * size).max(1e-14) {
                return Err(Error::RadiiDisagree {
                    order: e.order as u32,
                    first: size,
                    second: e.error_estimate,
                });
            }
        }
        Ok(table
            .into_iter()
            .map(|e| Complex64::new(e.value[0], e.value[1]))
            .collect())
    }

    /// The raw two-radius derivative table with per-order error estimates;
    /// never fails on disagreement (that is the caller's decision), only on
    /// evaluation problems.
    pub fn derivative_table(
        &self,
        center: Complex64,
        max_order: usize,
    ) -> Result<Vec<DerivativeEntry>> {
        if max_order > 24 {
            return Err(Error::OutOfRange(format!("derivative order {max_order} (cap 24)")));
        }
        let quarter = self.cauchy_ladder(center, 0.25, max_order)?;
        let eighth = self.cauchy_ladder(center, 0.125, max_order)?;
        Ok(quarter
            .into_iter()
            .zip(eighth)
            .enumerate()
            .map(|(order, (a, b))| DerivativeEntry {
                order,
                value: [a.re, a.im],
                error_estimate: (a - b).norm(),
            })
            .collect())
    }

    /// JSON rows {order, value: [re, im], error_estimate} for external
    /// consumers of a derivative table.
    pub fn derivative_table_json(&self, center: Complex64, max_order: usize) -> Result<String> {
        let table = self.derivative_table(center, max_order)?;
        serde_json::to_string_pretty(&table).map_err(|e| Error::Invalid(e.to_string()))
    }

    fn cauchy_ladder(
        &self,
        center: Complex64,
        radius: f64,
        max_order: usize,
    ) -> Result<Vec<Complex64>> {
        let central = (center - Complex64::new(0.5, 0.0)).norm() < 1e-13;
        let parity = central.then(|| self.form.epsilon() as f64);
        cauchy_circle(&|s| self.lambda(s), center, radius, max_order, parity)
    }
}

/// Derivatives of an arbitrary evaluator by a 256-node Cauchy circle.  With
/// `parity = Some(ε)` the evaluator is assumed to satisfy f(2c−s) = ε f(s)
/// (the functional equation at c = 1/2): only the upper half-circle is
/// evaluated and each node pair carries 1 + ε(−1)^j, so the parity-forced
/// orders vanish identically, not merely to rounding.
pub(crate) fn cauchy_circle<F>(
    eval: &F,
    center: Complex64,
    radius: f64,
    max_order: usize,
    parity: Option<f64>,
) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let n = CAUCHY_NODES;
    let half = parity.is_some();
    let upper: Vec<Complex64> = (0..if half { n / 2 } else { n })
        .into_par_iter()
        .map(|m| {
            let theta = 2.0 * PI * m as f64 / n as f64;
            eval(center + Complex64::from_polar(radius, theta))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(max_order + 1);
    let mut factorial = 1.0f64;
    for j in 0..=max_order {
        if j > 0 {
            factorial *= j as f64;
        }
        let pair = match parity {
            Some(eps) => {
                if j % 2 == 0 {
                    1.0 + eps
                } else {
                    1.0 - eps
                }
            }
            None => 1.0,
        };
        if pair == 0.0 {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, v) in upper.iter().enumerate() {
            let phase = -(2.0 * PI * (j * m % n) as f64) / n as f64;
            acc += v * Complex64::from_polar(1.0, phase);
        }
        out.push(acc * pair * factorial / (n as f64 * radius.powi(j as i32)));
    }
    Ok(out)
}

/// Envelope for the n-th series term at Re s = sigma: n^{ν+1} against both
/// incomplete-gamma factors, each bounded by x^a e^{−x}/(x−a+1).
fn series_tail_envelope(n: usize, sigma: f64, nu: f64) -> f64 {
    let x = 2.0 * PI * n as f64;
    let lnn = (n as f64).ln();
    let g = |a: f64| -> f64 {
        if a <= 1.0 {
            (a - 1.0) * x.ln() - x
        } else if x > a + 1.0 {
            a * x.ln() - x - (x - a + 1.0).ln()
        } else {
            // still left of the exponential regime; no useful bound yet
            f64::INFINITY
        }
    };
    let b1 = (nu + 1.0) * lnn - (sigma + nu) * x.ln() + g(sigma + nu);
    let b2 = (nu + 1.0) * lnn + (sigma - 1.0 - nu) * x.ln() + g(1.0 - sigma + nu);
    b1.exp() + b2.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenforms::hecke_basis;

    fn delta_l() -> CompletedLFunction {
        CompletedLFunction::new(hecke_basis(12, 80).unwrap().remove(0))
    }

    fn f18_l() -> CompletedLFunction {
        CompletedLFunction::new(hecke_basis(18, 80).unwrap().remove(0))
    }

    // Frozen values: 40-digit evaluation of the same incomplete-gamma series
    // with exact tau(n).

    #[test]
    fn central_value_frozen() {
        let l = delta_l();
        let v = l.lambda(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 0.001544879360395027206).abs() < 1e-15, "{v}");
        assert!(v.im.abs() < 1e-18);
    }

    #[test]
    fn dirichlet_region_value_frozen() {
        let l = delta_l();
        let v = l.lambda(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - 0.0017521486269300716682).abs() < 1e-15, "{v}");
        let lv = l.l_value(Complex64::new(2.0, 0.0)).unwrap();
        assert!((lv.re - 0.90737569627003168218).abs() < 1e-11, "{lv}");
    }

    #[test]
    fn complex_point_frozen() {
        let l = delta_l();
        let v = l.lambda(Complex64::new(0.73, 0.4)).unwrap();
        assert!((v.re - 0.001535533941389791097).abs() < 1e-15);
        assert!((v.im - 0.000015878448420160939771).abs() < 1e-15);
    }

    #[test]
    fn functional_equation_grid() {
        for (k, tol) in [(12u32, 1e-10), (18, 1e-10), (24, 1e-10), (38, 1e-10)] {
            for f in hecke_basis(k, 80).unwrap() {
                let l = CompletedLFunction::new(f);
                let eps = l.epsilon() as f64;
                for i in 0..5 {
                    for j in 0..5 {
                        let s = Complex64::new(0.2 + 0.15 * i as f64, -2.0 + j as f64);
                        let a = l.lambda(s).unwrap();
                        let b = l.lambda(Complex64::new(1.0, 0.0) - s).unwrap();
                        let resid = (a - eps * b).norm();
                        assert!(resid < tol * a.norm().max(1.0), "k={k} s={s}: {resid:.3e}");
                    }
                }
            }
        }
    }

    #[test]
    fn critical_line_reality() {
        let l = delta_l(); // ε = +1: real on the line
        for &t in &[0.0, 0.7, 2.0, 9.0] {
            let v = l.lambda(Complex64::new(0.5, t)).unwrap();
            assert!(v.im.abs() < 1e-10 * v.re.abs().max(1e-6), "t={t}: {v}");
        }
        let l = f18_l(); // ε = −1: purely imaginary on the line
        for &t in &[0.3, 1.1, 4.0] {
            let v = l.lambda(Complex64::new(0.5, t)).unwrap();
            assert!(v.re.abs() < 1e-10 * v.im.abs().max(1e-6), "t={t}: {v}");
        }
    }

    #[test]
    fn odd_sign_central_zero() {
        let v = f18_l().lambda(Complex64::new(0.5, 0.0)).unwrap();
        assert!(v.norm() < 1e-12, "{v}");
        let w = f18_l().lambda(Complex64::new(0.6, 0.0)).unwrap();
        assert!((w.re - 0.0001717256519052410773).abs() < 1e-15);
    }

    #[test]
    fn euler_product_converges_to_l() {
        let l = delta_l();
        let f = hecke_basis(12, 120).unwrap().remove(0);
        let lv = l.l_value(Complex64::new(2.0, 0.0)).unwrap().re;
        let mut prod = 1.0;
        let primes = [
            2usize, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
            73, 79, 83, 89, 97,
        ];
        for &p in &primes {
            let ps = (p as f64).powi(-2);
            prod /= 1.0 - f.lambda(p) * ps + ps * ps;
        }
        // Frozen from the oracle: relative gap 2.45634409973e−5 at P = 100.
        let gap = lv / prod - 1.0;
        assert!(gap.abs() < 1e-4, "gap {gap:.3e}");
        assert!((gap - 2.45634409973e-5).abs() < 1e-10, "gap {gap:.6e}");
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let l = delta_l();
        let d = l.lambda_derivatives(Complex64::new(3.0, 0.0), 1).unwrap();
        let h = 1e-5;
        let fd = (l.lambda(Complex64::new(3.0 + h, 0.0)).unwrap()
            - l.lambda(Complex64::new(3.0 - h, 0.0)).unwrap())
            / (2.0 * h);
        assert!((d[1] - fd).norm() < 1e-6, "{} vs {}", d[1], fd);
        // Frozen against the 40-digit oracle.
        assert!((d[1].re - 0.0006012197326278791368).abs() < 1e-12);
    }

    #[test]
    fn central_parity_forces_exact_zeros() {
        let c = Complex64::new(0.5, 0.0);
        let table = delta_l().derivative_table(c, 9).unwrap(); // ε = +1
        for j in (1..=9).step_by(2) {
            assert_eq!(table[j].value, [0.0, 0.0], "order {j}");
            assert_eq!(table[j].error_estimate, 0.0);
        }
        let table = f18_l().derivative_table(c, 9).unwrap(); // ε = −1
        for j in (0..=9).step_by(2) {
            assert_eq!(table[j].value, [0.0, 0.0], "order {j}");
        }

        // The strict two-radius path on the orders that carry signal.
        let d = delta_l().lambda_derivatives(c, 4).unwrap();
        assert!(d[0].re > 0.0 && d[2].re > 0.0 && d[4].re > 0.0);
        assert_eq!(d[1], Complex64::new(0.0, 0.0));
        let d = f18_l().lambda_derivatives(c, 3).unwrap();
        assert_eq!(d[0], Complex64::new(0.0, 0.0));
        assert!(d[1].norm() > 0.0);
    }

    #[test]
    fn taylor_sum_reaches_nearby_point() {
        let l = delta_l();
        let d = l.lambda_derivatives(Complex64::new(0.75, 0.0), 4).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut fact = 1.0;
        for (j, v) in d.iter().enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            acc += v * 0.05f64.powi(j as i32) / fact;
        }
        let direct = l.lambda(Complex64::new(0.80, 0.0)).unwrap();
        assert!((acc - direct).norm() < 1e-9, "{acc} vs {direct}");
    }

    #[test]
    fn derivative_table_reports_estimates() {
        let l = delta_l();
        let table = l.derivative_table(Complex64::new(0.5, 0.0), 10).unwrap();
        assert_eq!(table.len(), 11);
        assert!(table[0].error_estimate < 1e-14);
        let json = l.derivative_table_json(Complex64::new(0.5, 0.0), 4).unwrap();
        assert!(json.contains("\"order\": 4") && json.contains("error_estimate"));
    }

    #[test]
    fn out_of_strip_is_rejected() {
        let l = delta_l();
        assert!(matches!(
            l.lambda(Complex64::new(0.5, 51.0)),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            l.derivative_table(Complex64::new(0.5, 0.0), 25),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn short_series_names_required_length() {
        let l = CompletedLFunction::new(hecke_basis(12, 3).unwrap().remove(0));
        match l.lambda(Complex64::new(0.5, 0.0)) {
            Err(Error::InsufficientCoefficients { required, available }) => {
                assert_eq!(available, 3);
                assert_eq!(required, 4);
            }
            other => panic!("expected coefficient shortfall, got {other:?}"),
        }
    }

    #[test]
    fn high_weight_evaluates() {
        // k = 38 needs ~25 series terms; check FE and reality hold there too.
        let f = hecke_basis(38, 80).unwrap().remove(0);
        let l = CompletedLFunction::new(f);
        let v = l.lambda(Complex64::new(0.5, 0.0)).unwrap();
        assert!(v.im.abs() < 1e-14 * v.re.abs().max(1e-10));
        let a = l.lambda(Complex64::new(0.8, 1.3)).unwrap();
        let b = l.lambda(Complex64::new(0.2, -1.3)).unwrap();
        assert!((a + b).norm() < 1e-10 * a.norm().max(1.0)); // ε = −1 at k = 38
    }
}
