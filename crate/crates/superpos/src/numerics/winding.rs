//! Winding numbers of analytic functions along closed polyline contours,
//! by adaptive phase tracking (no logarithmic derivatives, no quadrature).

use num_complex::Complex64;

use crate::{Error, Result};

/// Outcome of a winding-number computation.
#[derive(Debug, Clone, Copy)]
pub struct WindingResult {
    /// Net number of counterclockwise turns of `φ` around 0.
    pub winding: i64,
    /// Distance of the accumulated turn count from the nearest integer.
    pub margin: f64,
    /// Smallest `|φ|` seen on the contour.
    pub min_abs: f64,
    /// Largest `|φ|` seen on the contour.
    pub max_abs: f64,
    /// Number of contour samples used.
    pub samples: usize,
}

const MAX_SAMPLES: usize = 400_000;
const MAX_DEPTH: u32 = 48;
/// A zero within this relative distance of the contour makes the phase
/// untrustworthy.
const ZERO_FLOOR: f64 = 1e-12;

struct Tracker {
    total_phase: f64,
    min_abs: f64,
    max_abs: f64,
    samples: usize,
    max_step: f64,
}

impl Tracker {
    /// Accumulate the phase change along the segment `z0 → z1`, bisecting in
    /// parameter space until each step turns by less than `max_step`.
    fn segment<F: Fn(Complex64) -> Complex64>(
        &mut self,
        phi: &F,
        z0: Complex64,
        f0: Complex64,
        z1: Complex64,
        f1: Complex64,
        depth: u32,
    ) -> Result<()> {
        let step = (f1 / f0).arg();
        // Near ±π the sign of the turn is ambiguous; refine those too.
        if step.abs() <= self.max_step && step.abs() < 3.0 {
            self.total_phase += step;
            return Ok(());
        }
        if depth >= MAX_DEPTH || self.samples >= MAX_SAMPLES {
            return Err(Error::WindingBudget { samples: self.samples });
        }
        let zm = (z0 + z1).scale(0.5);
        let fm = self.eval(phi, zm)?;
        self.segment(phi, z0, f0, zm, fm, depth + 1)?;
        self.segment(phi, zm, fm, z1, f1, depth + 1)
    }

    fn eval<F: Fn(Complex64) -> Complex64>(&mut self, phi: &F, z: Complex64) -> Result<Complex64> {
        let v = phi(z);
        if v == Complex64::new(0.0, 0.0) || !v.is_finite() {
            return Err(Error::ContourValue { at: z });
        }
        self.samples += 1;
        self.min_abs = self.min_abs.min(v.norm());
        self.max_abs = self.max_abs.max(v.norm());
        // Bail as soon as the contour provably grazes a zero, rather than
        // burning the whole bisection budget resolving an untrackable phase.
        // (max_abs only grows, so this can never fire spuriously early.)
        if self.min_abs < ZERO_FLOOR * self.max_abs {
            return Err(Error::ContourTooCloseToZero {
                min_abs: self.min_abs,
                floor: ZERO_FLOOR * self.max_abs,
            });
        }
        Ok(v)
    }
}

/// Count zeros of `phi` (with multiplicity) inside the closed polyline through
/// `vertices` (closure back to the first vertex is implicit).
///
/// `max_step_phase` caps the phase turn accepted between adjacent samples;
/// anything `< π/2` is safe, smaller is slower and stricter.  Fails if the
/// accumulated turn misses an integer by more than 0.1, if `φ` vanishes on the
/// contour, or if `min |φ| < 1e−12 · max |φ|` along it.
pub fn winding_number<F: Fn(Complex64) -> Complex64>(
    phi: F,
    vertices: &[Complex64],
    max_step_phase: f64,
) -> Result<WindingResult> {
    if vertices.len() < 3 {
        return Err(Error::OutOfRange(format!(
            "winding contour needs ≥ 3 vertices, got {}",
            vertices.len()
        )));
    }
    if !(max_step_phase > 0.0 && max_step_phase < std::f64::consts::FRAC_PI_2 + 1e-12) {
        return Err(Error::OutOfRange(format!(
            "max_step_phase {max_step_phase} outside (0, π/2]"
        )));
    }

    let mut tr = Tracker {
        total_phase: 0.0,
        min_abs: f64::INFINITY,
        max_abs: 0.0,
        samples: 0,
        max_step: max_step_phase,
    };

    let first = tr.eval(&phi, vertices[0])?;
    let mut z_prev = vertices[0];
    let mut f_prev = first;
    for i in 1..=vertices.len() {
        let z_next = vertices[i % vertices.len()];
        if z_next == z_prev {
            continue;
        }
        let f_next = if i == vertices.len() { first } else { tr.eval(&phi, z_next)? };
        tr.segment(&phi, z_prev, f_prev, z_next, f_next, 0)?;
        z_prev = z_next;
        f_prev = f_next;
    }

    if tr.min_abs < ZERO_FLOOR * tr.max_abs {
        return Err(Error::ContourTooCloseToZero {
            min_abs: tr.min_abs,
            floor: ZERO_FLOOR * tr.max_abs,
        });
    }

    let turns = tr.total_phase / (2.0 * std::f64::consts::PI);
    let winding = turns.round();
    let margin = (turns - winding).abs();
    if margin > 0.1 {
        return Err(Error::NonIntegerWinding { turns });
    }
    Ok(WindingResult {
        winding: winding as i64,
        margin,
        min_abs: tr.min_abs,
        max_abs: tr.max_abs,
        samples: tr.samples,
    })
}
