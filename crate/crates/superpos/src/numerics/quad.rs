//! Adaptive quadrature built on the 15-point Kronrod extension of 7-point
//! Gauss, with QUADPACK-style error rescaling and greedy panel bisection.

use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::{Error, Result};

/// Abscissae of the 15-point Kronrod rule (positive half, descending order).
/// Odd indices are the embedded 7-point Gauss abscissae.
pub(crate) const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

pub(crate) const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Values an integrand may take.  Implemented for `f64` and `Complex64` so a
/// single adaptive driver serves both.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult<T> {
    pub value: T,
    /// Sum of per-panel Kronrod−Gauss error estimates (rescaled).
    pub error_estimate: f64,
    pub panels_used: u32,
    /// Bound on the discarded tail; zero for finite intervals.
    pub tail_bound: f64,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    /// |∫f| estimate, used for the noise floor.
    resabs: f64,
}

/// QUADPACK's heuristic: damp the raw `|K15 − G7|` difference by how much the
/// integrand deviates from its mean, and floor at roundoff of `∫|f|`.
fn rescale_error(err: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut err = err.abs();
    if result_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / result_asc).powf(1.5);
        err = if scale < 1.0 { result_asc * scale } else { result_asc };
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * result_abs);
    }
    err
}

fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Result<Panel<T>> {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);

    let mut eval = |x: f64| -> Result<T> {
        let v = f(x);
        if !v.norm().is_finite() {
            return Err(Error::NonFinite { x });
        }
        Ok(v)
    };

    let fc = eval(centr)?;
    let mut resg = fc.scale(WG[3]);
    let mut resk = fc.scale(WGK[7]);
    let mut resabs = resk.norm();

    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let f1 = eval(centr - absc)?;
        let f2 = eval(centr + absc)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let fsum = f1.add(f2);
        resg = resg.add(fsum.scale(WG[j]));
        resk = resk.add(fsum.scale(WGK[jtw]));
        resabs += WGK[jtw] * (f1.norm() + f2.norm());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        if jtwm1 == 7 {
            continue;
        }
        let absc = hlgth * XGK[jtwm1];
        let f1 = eval(centr - absc)?;
        let f2 = eval(centr + absc)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        let fsum = f1.add(f2);
        resk = resk.add(fsum.scale(WGK[jtwm1]));
        resabs += WGK[jtwm1] * (f1.norm() + f2.norm());
    }

    let reskh = resk.scale(0.5);
    let mut resasc = WGK[7] * fc.sub(reskh).norm();
    for j in 0..7 {
        resasc += WGK[j] * (fv1[j].sub(reskh).norm() + fv2[j].sub(reskh).norm());
    }

    let value = resk.scale(hlgth);
    let resabs = resabs * hlgth.abs();
    let resasc = resasc * hlgth.abs();
    let err = rescale_error((resk.sub(resg)).norm() * hlgth, resabs, resasc);

    Ok(Panel { a, b, value, error: err, resabs })
}

/// Heap entry ordered by error, with an insertion counter so ties break
/// deterministically.
struct ByError {
    error: f64,
    seq: u64,
    idx: usize,
}

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .total_cmp(&other.error)
            .then(other.seq.cmp(&self.seq))
    }
}

const MAX_PANELS: u32 = 20_000;

fn adaptive<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    breakpoints: &[f64],
    tol: f64,
) -> Result<QuadratureResult<T>> {
    adaptive_floor(f, breakpoints, tol, 0.0)
}

fn adaptive_floor<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    breakpoints: &[f64],
    tol: f64,
    abs_floor: f64,
) -> Result<QuadratureResult<T>> {
    let mut panels: Vec<Panel<T>> = Vec::new();
    let mut heap: BinaryHeap<ByError> = BinaryHeap::new();
    let mut seq = 0u64;

    for w in breakpoints.windows(2) {
        let p = gk15(f, w[0], w[1])?;
        heap.push(ByError { error: p.error, seq, idx: panels.len() });
        seq += 1;
        panels.push(p);
    }

    let mut value = T::zero();
    let mut err_sum = 0.0;
    let mut abs_sum = 0.0;
    for p in &panels {
        value = value.add(p.value);
        err_sum += p.error;
        abs_sum += p.resabs;
    }

    let mut count = panels.len() as u32;
    let finish = |panels: &[Panel<T>], count: u32| {
        // Re-sum from scratch so incremental drift never reaches the caller.
        let mut value = T::zero();
        let mut err_sum = 0.0;
        for p in panels {
            value = value.add(p.value);
            err_sum += p.error;
        }
        QuadratureResult { value, error_estimate: err_sum, panels_used: count, tail_bound: 0.0 }
    };

    loop {
        // Relative target, floored at what cancellation allows and at any
        // caller-supplied absolute floor (for integrands that are noisy at
        // a known level, e.g. built from inner quadratures).
        let bound = (tol * value.norm())
            .max(100.0 * f64::EPSILON * abs_sum)
            .max(abs_floor)
            .max(1e-300);
        if err_sum <= bound {
            return Ok(finish(&panels, count));
        }
        if count >= MAX_PANELS {
            let r = finish(&panels, count);
            return Err(Error::NoConvergence {
                partial: r.value.norm(),
                error_estimate: r.error_estimate,
                panels: count,
            });
        }

        let worst = match heap.pop() {
            Some(w) => w,
            // Every panel is at roundoff width; accept what we have.
            None => return Ok(finish(&panels, count)),
        };
        let (a, b) = (panels[worst.idx].a, panels[worst.idx].b);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Panel narrower than f64 spacing: keep its estimate, stop
            // splitting it (treated as converged at roundoff).
            continue;
        }
        let left = gk15(f, a, mid)?;
        let right = gk15(f, mid, b)?;
        let old = &panels[worst.idx];
        value = value.add(left.value).add(right.value).sub(old.value);
        err_sum += left.error + right.error - old.error;
        abs_sum += left.resabs + right.resabs - old.resabs;
        panels[worst.idx] = left;
        heap.push(ByError { error: panels[worst.idx].error, seq, idx: worst.idx });
        seq += 1;
        heap.push(ByError { error: right.error, seq, idx: panels.len() });
        seq += 1;
        panels.push(right);
        count += 1;
    }
}

/// Integrate a real function over `[a, b]` to relative tolerance `tol`.
///
/// The reported `error_estimate` is the sum of per-panel Kronrod−Gauss
/// discrepancies; non-convergence after the panel budget is an error carrying
/// the partial value.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult<f64>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::OutOfRange(format!("integrate endpoints [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, error_estimate: 0.0, panels_used: 0, tail_bound: 0.0 });
    }
    adaptive(&mut f, &[a, b], tol)
}

/// Like [`integrate`], but with an absolute error floor below which the
/// driver stops refining.  Use when the integrand itself carries noise (for
/// instance when each evaluation is an inner quadrature), so the relative
/// target may be unreachable without the result being wrong.
pub fn integrate_with_floor<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    abs_floor: f64,
) -> Result<QuadratureResult<f64>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::OutOfRange(format!("integrate endpoints [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, error_estimate: 0.0, panels_used: 0, tail_bound: 0.0 });
    }
    adaptive_floor(&mut f, &[a, b], tol, abs_floor)
}

/// Integrate a complex-valued function over a real interval.
pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult<Complex64>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::OutOfRange(format!("integrate endpoints [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            panels_used: 0,
            tail_bound: 0.0,
        });
    }
    adaptive(&mut f, &[a, b], tol)
}

/// How an integrand on `[0, ∞)` eventually decays; used to pick the
/// truncation point and to certify the discarded tail.
#[derive(Debug, Clone, Copy)]
pub enum DecayHint {
    /// `|f(u)| ≲ C e^{−rate·u}` for large `u`.
    Exponential { rate: f64 },
    /// `|f(u)| ≲ C u^{−power}` for large `u` (`power > 1`).
    Polynomial { power: f64 },
}

/// Truncation point for polynomial decay.  Matches the zero-density pipeline,
/// whose integrands flatten to a pure power law well before this.
const POLY_CUTOFF: f64 = 400.0;

/// Integrate over `[0, ∞)`: truncate according to `hint`, fit the tail from
/// late samples, and record the tail bound in the result.  The tail bound is
/// *not* added to the value.
pub fn integrate_semiinfinite<F: FnMut(f64) -> f64>(
    mut f: F,
    hint: DecayHint,
    tol: f64,
) -> Result<QuadratureResult<f64>> {
    match hint {
        DecayHint::Exponential { rate } => {
            if !(rate > 0.0) {
                return Err(Error::OutOfRange(format!("exponential decay rate {rate}")));
            }
            let mut upper = (40.0 / rate).max(10.0);
            let mut tail;
            let mut grows = 0;
            loop {
                // Sample near the cutoff; an e-fold of slack absorbs the
                // prefactor drifting over the last stretch.
                let s0 = f(upper).abs();
                let s1 = f(upper - 0.5 / rate).abs();
                tail = s0.max(s1 * (-0.5f64).exp()) / rate * 2.0;
                if !tail.is_finite() {
                    return Err(Error::NonFinite { x: upper });
                }
                if tail < tol / 2.0 || upper * rate > 800.0 {
                    break;
                }
                upper *= 1.5;
                grows += 1;
                if grows > 60 {
                    return Err(Error::TailUnverifiable { estimate: tail, needed: tol / 2.0 });
                }
            }
            let mut breaks = vec![0.0];
            let mut x = (1.0 / rate).min(upper / 8.0);
            while x < upper {
                breaks.push(x);
                x *= 2.0;
            }
            breaks.push(upper);
            let mut res = adaptive(&mut f, &breaks, tol)?;
            if tail >= tol / 2.0 * res.value.abs().max(1.0) {
                return Err(Error::TailUnverifiable { estimate: tail, needed: tol / 2.0 });
            }
            res.tail_bound = tail;
            Ok(res)
        }
        DecayHint::Polynomial { power } => {
            if !(power > 1.0) {
                return Err(Error::OutOfRange(format!("polynomial decay power {power}")));
            }
            let upper = POLY_CUTOFF;
            // Fit C from the last decade: conservative max of |f(u)|·u^power.
            let mut c_fit = 0.0f64;
            let mut c_min = f64::INFINITY;
            let mut u = upper / 10.0;
            while u <= upper * 1.0001 {
                let s = f(u).abs() * u.powf(power);
                if !s.is_finite() {
                    return Err(Error::NonFinite { x: u });
                }
                c_fit = c_fit.max(s);
                c_min = c_min.min(s);
                u *= 10f64.powf(0.125);
            }
            let tail = c_fit * upper.powf(1.0 - power) / (power - 1.0);
            let breaks = [0.0, 1.0, 4.0, 16.0, 64.0, 160.0, upper];
            let mut res = adaptive(&mut f, &breaks, tol)?;
            // A wildly varying fit means the power-law model is wrong; only
            // acceptable when the implied tail is already negligible.
            if c_min > 0.0 && c_fit / c_min > 1e4 && tail > tol * res.value.abs().max(1.0) {
                return Err(Error::TailUnverifiable { estimate: tail, needed: tol });
            }
            res.tail_bound = tail;
            Ok(res)
        }
    }
}
