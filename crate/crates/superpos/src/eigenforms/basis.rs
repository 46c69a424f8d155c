//! Echelonized integral bases of the cusp spaces S_k, exact Hecke matrices,
//! and the numeric spectral step (characteristic polynomial, real roots in
//! the Deligne window, balanced eigenvectors).

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::eigenforms::qexp::{delta, eisenstein, QExpansion};
use crate::{Error, Result};

/// dim S_k for the full modular group: ⌊k/12⌋ − [k ≡ 2 mod 12] for even k,
/// zero for odd or small weights.
pub fn cusp_dim(k: u32) -> usize {
    if k % 2 != 0 || k < 12 {
        return 0;
    }
    let d = (k / 12) as i64 - i64::from(k % 12 == 2);
    d.max(0) as usize
}

/// The echelonized (Victor–Miller) basis h_1..h_dim of S_k to truncation
/// order `n`: h_i(m) = δ_{im} for m ≤ dim, all coefficients integers.
///
/// Each monomial Δ^j · E₄^b · E₆^c of weight k is monic at q^j, so the
/// change of basis is integer back-substitution — no rational arithmetic.
pub fn echelon_basis(k: u32, n: usize) -> Result<Vec<QExpansion>> {
    let d = cusp_dim(k);
    if d == 0 {
        return Err(Error::EmptySpace { weight: k });
    }
    if n < 2 * d {
        return Err(Error::InsufficientCoefficients { required: 2 * d, available: n });
    }
    let e4 = eisenstein(4, n);
    let e6 = eisenstein(6, n);
    let dser = delta(n);
    // Weight bookkeeping: k − 12j = 4b + 6c with c ∈ {0,1} fixed by k mod 4.
    let c = u32::from(k % 4 != 0);
    let mut mons: Vec<QExpansion> = Vec::with_capacity(d);
    let mut delta_j = dser.clone();
    for j in 1..=d as u32 {
        let w = k - 12 * j;
        let b = (w - 6 * c) / 4;
        debug_assert_eq!(4 * b + 6 * c, w);
        let mut m = delta_j.mul(&e4.pow(b));
        if c == 1 {
            m = m.mul(&e6);
        }
        debug_assert_eq!(m.weight(), k);
        mons.push(m);
        if (j as usize) < d {
            delta_j = delta_j.mul(&dser);
        }
    }
    // Back-substitute from the bottom: mons[i−1] = q^i + O(q^{i+1}).
    let mut h: Vec<Option<Vec<BigInt>>> = vec![None; d + 1];
    for i in (1..=d).rev() {
        let mut g: Vec<BigInt> = mons[i - 1].coeffs().to_vec();
        for j in i + 1..=d {
            let coef = g[j].clone();
            if !coef.is_zero() {
                let hj = h[j].as_ref().unwrap();
                for (gm, hm) in g.iter_mut().zip(hj) {
                    *gm -= &coef * hm;
                }
            }
        }
        for (m, gm) in g.iter().enumerate().take(d + 1) {
            let want = i64::from(m == i);
            assert_eq!(gm, &BigInt::from(want), "echelon failure at k={k}, i={i}, m={m}");
        }
        h[i] = Some(g);
    }
    Ok(h.into_iter()
        .flatten()
        .map(|coeffs| QExpansion::from_coeffs(k, coeffs))
        .collect())
}

/// The matrix of T_p on an echelon basis, acting on coefficient columns:
/// `m[j][i]` = (T_p h_{i+1})(j+1) = h_{i+1}(p(j+1)) + p^{k−1} h_{i+1}((j+1)/p).
pub(crate) fn hecke_matrix(k: u32, basis: &[QExpansion], p: usize) -> Vec<Vec<BigInt>> {
    let d = basis.len();
    let pk = BigInt::from(p).pow(k - 1);
    let mut m = vec![vec![BigInt::zero(); d]; d];
    for (i, h) in basis.iter().enumerate() {
        for (j, row) in m.iter_mut().enumerate() {
            let idx = j + 1;
            let mut a = h.coeff(p * idx).clone();
            if idx % p == 0 {
                a += &pk * h.coeff(idx / p);
            }
            row[i] = a;
        }
    }
    m
}

/// Characteristic polynomial of an integer matrix by the Faddeev–LeVerrier
/// recurrence; returned monic, low-to-high.  The trace divisions are exact
/// (asserted) because the coefficients are integers.
pub(crate) fn char_poly(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let d = m.len();
    let mut aux: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); d + 1];
    coeffs[d] = BigInt::from(1);
    for step in 1..=d {
        // aux ← M·aux
        let prod: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|l| &m[i][l] * &aux[l][j]).sum())
                    .collect()
            })
            .collect();
        let tr: BigInt = (0..d).map(|i| prod[i][i].clone()).sum();
        let (c, rem) = num_integer::Integer::div_rem(&tr, &BigInt::from(step));
        assert!(rem.is_zero(), "Faddeev–LeVerrier trace not divisible");
        coeffs[d - step] = -c.clone();
        aux = prod;
        for (i, row) in aux.iter_mut().enumerate() {
            row[i] -= &c;
            let _ = i;
        }
    }
    coeffs
}

/// `b · 2^shift` as an f64, for big integers far outside f64 range: the top
/// 112 bits carry the mantissa, the rest moves into the exponent.
pub(crate) fn big_scaled(b: &BigInt, shift_log2: f64) -> f64 {
    if b.is_zero() {
        return 0.0;
    }
    let mag = b.magnitude();
    let bits = mag.bits();
    let take = bits.min(112);
    let top = (mag >> (bits - take)).to_u128().expect("≤112 bits") as f64;
    let v = top * ((bits - take) as f64 + shift_log2).exp2();
    if b.is_negative() {
        -v
    } else {
        v
    }
}

/// Real roots of the scaled characteristic polynomial in λ(2)-normalization:
/// the roots of p(2^{(k−1)/2} y) / 2^{d(k−1)/2}, all in [−2, 2] by the
/// Deligne bound.  Ascending order; repeated roots are a hard failure.
pub(crate) fn scaled_roots(coeffs: &[BigInt], k: u32) -> Result<Vec<f64>> {
    let d = coeffs.len() - 1;
    let s = (k - 1) as f64 / 2.0;
    let b: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| big_scaled(a, (i as f64 - d as f64) * s))
        .collect();
    let eval = |y: f64| b.iter().rev().fold(0.0, |acc, &c| acc * y + c);
    let dval = |y: f64| {
        b.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * y + i as f64 * c)
    };

    let (lo, hi) = (-2.05f64, 2.05f64);
    let steps = 8192;
    let mut roots = Vec::with_capacity(d);
    let mut prev_x = lo;
    let mut prev_f = eval(lo);
    for i in 1..=steps {
        let x = lo + (hi - lo) * i as f64 / steps as f64;
        let f = eval(x);
        if f == 0.0 {
            roots.push(x);
        } else if prev_f != 0.0 && (prev_f < 0.0) != (f < 0.0) {
            let (mut a, mut fb, mut c) = (prev_x, prev_f, x);
            for _ in 0..90 {
                let mid = 0.5 * (a + c);
                if mid <= a || mid >= c {
                    break;
                }
                let fm = eval(mid);
                if fm == 0.0 {
                    a = mid;
                    c = mid;
                    break;
                }
                if (fm < 0.0) == (fb < 0.0) {
                    a = mid;
                    fb = fm;
                } else {
                    c = mid;
                }
            }
            let mut y = 0.5 * (a + c);
            for _ in 0..3 {
                let dy = dval(y);
                if dy != 0.0 {
                    let step = eval(y) / dy;
                    if step.is_finite() && step.abs() < 1e-3 {
                        y -= step;
                    }
                }
            }
            roots.push(y);
        }
        prev_x = x;
        prev_f = f;
    }
    if roots.len() != d {
        // A sign scan cannot see even-multiplicity clusters.
        return Err(Error::RepeatedEigenvalue { weight: k, gap: 0.0 });
    }
    for w in roots.windows(2) {
        let gap = (w[1] - w[0]) / w[0].abs().max(w[1].abs()).max(1.0);
        if gap < 1e-6 {
            return Err(Error::RepeatedEigenvalue { weight: k, gap });
        }
    }
    Ok(roots)
}

/// Eigenvector of the T₂ matrix for the root `y` (λ(2)-scale), in balanced
/// coordinates u_i = λ_f(i): inverse iteration on B = D⁻¹ M D / 2^{(k−1)/2}
/// with D = diag(i^{(k−1)/2}), whose entries are O(1).  Normalized to
/// u_1 = λ_f(1) = 1.
pub(crate) fn balanced_eigenvector(m: &[Vec<BigInt>], k: u32, y: f64) -> Result<Vec<f64>> {
    let d = m.len();
    let s = (k - 1) as f64 / 2.0;
    let b: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| {
                    let shift = s * (((i + 1) as f64).log2() - ((j + 1) as f64).log2() - 1.0);
                    big_scaled(&m[j][i], shift)
                })
                .collect()
        })
        .collect();
    let bnorm = b
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);

    // Inverse iteration: the slightly shifted matrix is safely factorable,
    // and two passes are enough when the shift error is ~1e−12.
    let mut shifted: Vec<Vec<f64>> = b.clone();
    for (j, row) in shifted.iter_mut().enumerate() {
        row[j] -= y + 1e-12 * bnorm.max(1.0);
    }
    let (lu, piv) = lu_factor_clamped(shifted, bnorm);
    let mut u = vec![1.0; d];
    for _ in 0..3 {
        u = lu_substitute(&lu, &piv, &u);
        let scale = u.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::IllConditioned { condition: f64::INFINITY });
        }
        u.iter_mut().for_each(|x| *x /= scale);
    }
    let umax = u.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
    let resid = (0..d)
        .map(|j| {
            let r: f64 = (0..d).map(|i| b[j][i] * u[i]).sum::<f64>() - y * u[j];
            r.abs()
        })
        .fold(0.0f64, f64::max);
    if resid > 1e-8 * bnorm.max(1.0) * umax {
        return Err(Error::IllConditioned { condition: resid / (bnorm * umax) });
    }
    if u[0].abs() < 1e-6 * umax {
        return Err(Error::IllConditioned { condition: umax / u[0].abs() });
    }
    let u1 = u[0];
    Ok(u.into_iter().map(|x| x / u1).collect())
}

/// LU with partial pivoting; near-zero pivots are clamped instead of
/// rejected (inverse iteration wants near-singular systems).
fn lu_factor_clamped(mut a: Vec<Vec<f64>>, scale: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let n = a.len();
    let mut piv: Vec<usize> = (0..n).collect();
    let floor = 1e-300_f64.max(1e-20 * scale.max(1.0) * f64::EPSILON);
    for col in 0..n {
        let (best, _) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        a.swap(col, best);
        piv.swap(col, best);
        if a[col][col].abs() < floor {
            a[col][col] = if a[col][col] < 0.0 { -floor } else { floor };
        }
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            a[r][col] = f;
            for cc in col + 1..n {
                a[r][cc] -= f * a[col][cc];
            }
        }
    }
    (a, piv)
}

fn lu_substitute(lu: &[Vec<f64>], piv: &[usize], rhs: &[f64]) -> Vec<f64> {
    let n = lu.len();
    let mut x: Vec<f64> = piv.iter().map(|&p| rhs[p]).collect();
    for r in 1..n {
        for c in 0..r {
            x[r] -= lu[r][c] * x[c];
        }
    }
    for r in (0..n).rev() {
        for c in r + 1..n {
            x[r] -= lu[r][c] * x[c];
        }
        x[r] /= lu[r][r];
    }
    x
}

/// Solve a small well-conditioned system, failing loudly when it is not.
/// Returns the solution and the pivot-ratio condition estimate.
pub(crate) fn solve_linear(a: Vec<Vec<f64>>, rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs())
        .fold(0.0f64, f64::max);
    let (lu, piv) = lu_factor_clamped(a, 0.0);
    let (mut pmax, mut pmin) = (0.0f64, f64::INFINITY);
    for i in 0..n {
        let p = lu[i][i].abs();
        pmax = pmax.max(p);
        pmin = pmin.min(p);
    }
    let condition = pmax / pmin;
    if !condition.is_finite() || condition > 1e13 || pmax < 1e-200 * scale.max(1.0) {
        return Err(Error::IllConditioned { condition });
    }
    Ok((lu_substitute(&lu, &piv, rhs), condition))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_table() {
        for (k, d) in [
            (12, 1),
            (14, 0),
            (16, 1),
            (18, 1),
            (20, 1),
            (22, 1),
            (24, 2),
            (26, 1),
            (28, 2),
            (36, 3),
            (38, 2),
            (40, 3),
            (68, 5),
            (130, 10),
            (2, 0),
            (11, 0),
        ] {
            assert_eq!(cusp_dim(k), d, "k = {k}");
        }
    }

    #[test]
    fn echelon_property_and_weights() {
        let basis = echelon_basis(24, 12).unwrap();
        assert_eq!(basis.len(), 2);
        for (i, h) in basis.iter().enumerate() {
            assert_eq!(h.weight(), 24);
            for m in 0..=2 {
                let want = i64::from(m == i + 1);
                assert_eq!(h.coeff(m), &BigInt::from(want));
            }
        }
    }

    #[test]
    fn empty_space_reported() {
        assert!(matches!(echelon_basis(14, 10), Err(Error::EmptySpace { weight: 14 })));
    }

    #[test]
    fn t2_matrix_k24_frozen() {
        let basis = echelon_basis(24, 8).unwrap();
        let m = hecke_matrix(24, &basis, 2);
        assert_eq!(m[0][0], BigInt::from(0));
        assert_eq!(m[0][1], BigInt::from(1));
        assert_eq!(m[1][0], BigInt::from(20468736i64));
        assert_eq!(m[1][1], BigInt::from(1080));
    }

    #[test]
    fn hecke_operators_commute_exactly() {
        for k in [24u32, 38, 40] {
            let d = cusp_dim(k);
            let basis = echelon_basis(k, 3 * d + 3).unwrap();
            let m2 = hecke_matrix(k, &basis, 2);
            let m3 = hecke_matrix(k, &basis, 3);
            let prod = |a: &[Vec<BigInt>], b: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
                (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| (0..d).map(|l| &a[i][l] * &b[l][j]).sum())
                            .collect()
                    })
                    .collect()
            };
            assert_eq!(prod(&m2, &m3), prod(&m3, &m2), "k = {k}");
        }
    }

    #[test]
    fn char_poly_k24_frozen() {
        let basis = echelon_basis(24, 8).unwrap();
        let cp = char_poly(&hecke_matrix(24, &basis, 2));
        assert_eq!(
            cp,
            vec![BigInt::from(-20468736i64), BigInt::from(-1080), BigInt::from(1)]
        );
    }

    #[test]
    fn scaled_roots_match_oracle() {
        // λ(2) values from a 50-digit independent computation.
        let expect: [(u32, &[f64]); 3] = [
            (24, &[-1.3867134517319789, 1.7596017933733223]),
            (38, &[-1.2958618507266847, 0.7714876202935455]),
            (40, &[-1.0778153054918729, 0.3256943162527602, 1.4923626112005608]),
        ];
        for (k, ys) in expect {
            let basis = echelon_basis(k, 2 * cusp_dim(k)).unwrap();
            let cp = char_poly(&hecke_matrix(k, &basis, 2));
            let roots = scaled_roots(&cp, k).unwrap();
            assert_eq!(roots.len(), ys.len());
            for (r, e) in roots.iter().zip(ys) {
                assert!((r - e).abs() < 1e-12, "k={k}: {r} vs {e}");
            }
        }
    }

    #[test]
    fn eigenvector_satisfies_hecke_at_two() {
        // λ(2)² = λ(4) + 1 must come out of the eigenvector for free.
        let k = 40;
        let basis = echelon_basis(k, 8).unwrap();
        let m = hecke_matrix(k, &basis, 2);
        let cp = char_poly(&m);
        for y in scaled_roots(&cp, k).unwrap() {
            let u = balanced_eigenvector(&m, k, y).unwrap();
            assert_eq!(u.len(), 3);
            assert!((u[0] - 1.0).abs() < 1e-14);
            assert!((u[1] - y).abs() < 1e-11, "λ(2) from vector vs root");
            let s = (k - 1) as f64 / 2.0;
            let lam4: f64 = (0..3)
                .map(|i| {
                    u[i] * big_scaled(basis[i].coeff(4), s * (((i + 1) as f64).log2() - 2.0))
                })
                .sum();
            assert!((y * y - lam4 - 1.0).abs() < 1e-11, "Hecke at p=2");
        }
    }

    #[test]
    fn big_scaled_round_trip() {
        let v = BigInt::from(-77i64) << 200usize;
        let got = big_scaled(&v, -200.0);
        assert_eq!(got, -77.0);
        assert_eq!(big_scaled(&BigInt::zero(), 3.0), 0.0);
        // half-integer shifts hit the √2 path
        let w = big_scaled(&BigInt::from(3), 0.5);
        assert!((w - 3.0 * std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn solve_linear_rejects_singular() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(matches!(
            solve_linear(a, &[1.0, 2.0]),
            Err(Error::IllConditioned { .. })
        ));
        let b = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let (x, cond) = solve_linear(b, &[3.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
        assert!(cond < 10.0);
    }
}
