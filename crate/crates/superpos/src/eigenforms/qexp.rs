//! Exact integer q-expansions of level-1 modular forms: the Eisenstein
//! generators E₄ and E₆, the discriminant form Δ, and truncated series
//! arithmetic over `BigInt` (coefficients grow like n^{k−1}, so fixed-width
//! integers are not an option).

use num_bigint::BigInt;
use num_traits::Zero;

/// A modular form of known weight, stored as exact integer coefficients
/// a(0..=N) of its q-expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    weight: u32,
    coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub(crate) fn from_coeffs(weight: u32, coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        QExpansion { weight, coeffs }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Highest exponent of q stored.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of qⁿ.  Panics beyond the truncation order.
    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Series product, truncated to the shorter operand.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let n = self.truncation().min(other.truncation());
        QExpansion {
            weight: self.weight + other.weight,
            coeffs: mul_trunc(&self.coeffs, &other.coeffs, n),
        }
    }

    /// Series power by repeated squaring.  `pow(0)` is the constant 1 in
    /// weight 0.
    pub fn pow(&self, e: u32) -> QExpansion {
        let n = self.truncation();
        let mut acc = constant_one(n);
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                return acc;
            }
            base = base.mul(&base);
        }
    }

    /// Difference of two forms of the same weight.
    pub fn sub(&self, other: &QExpansion) -> QExpansion {
        assert_eq!(self.weight, other.weight, "weights must match");
        let n = self.truncation().min(other.truncation());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        QExpansion { weight: self.weight, coeffs }
    }
}

fn constant_one(n: usize) -> QExpansion {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::from(1);
    QExpansion { weight: 0, coeffs }
}

fn mul_trunc(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate().take(n + 1 - i) {
            if !bk.is_zero() {
                c[i + k] += ai * bk;
            }
        }
    }
    c
}

/// The normalized Eisenstein series E₄ or E₆ to truncation order `n`:
/// E₄ = 1 + 240 Σ σ₃(m) qᵐ, E₆ = 1 − 504 Σ σ₅(m) qᵐ.
pub fn eisenstein(k: u32, n: usize) -> QExpansion {
    assert!(k == 4 || k == 6, "only the weight-4 and weight-6 generators exist");
    assert!(n <= 10_000);
    let (power, mult) = if k == 4 { (3u32, 240i64) } else { (5, -504) };
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::from(1);
    // divisor-power sums by sieving
    for d in 1..=n {
        let dp = BigInt::from(d).pow(power) * mult;
        let mut m = d;
        while m <= n {
            coeffs[m] += &dp;
            m += d;
        }
    }
    QExpansion { weight: k, coeffs }
}

/// The discriminant form Δ = q ∏ (1−qᵐ)²⁴ to truncation order `n`, computed
/// from the sparse pentagonal-number expansion of ∏(1−qᵐ).  The equivalent
/// construction (E₄³ − E₆²)/1728 is asserted to agree on n ≤ 512 here (and
/// in full by the unit suite); running it at every truncation order would
/// cost ~n² big-integer products for no extra information.
pub fn delta(n: usize) -> QExpansion {
    assert!((1..=10_000).contains(&n));
    // ∏(1−q^m) = Σ_j (−1)^j q^{j(3j∓1)/2}
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::from(1);
    let mut j = 1usize;
    loop {
        let g1 = j * (3 * j - 1) / 2;
        let g2 = j * (3 * j + 1) / 2;
        if g1 > n && g2 > n {
            break;
        }
        let s = if j % 2 == 1 { -1 } else { 1 };
        if g1 <= n {
            p[g1] += s;
        }
        if g2 <= n {
            p[g2] += s;
        }
        j += 1;
    }
    // P^24 by squaring: P² → P³ → P⁶ → P¹² → P²⁴
    let p2 = mul_trunc(&p, &p, n);
    let p3 = mul_trunc(&p2, &p, n);
    let p6 = mul_trunc(&p3, &p3, n);
    let p12 = mul_trunc(&p6, &p6, n);
    let p24 = mul_trunc(&p12, &p12, n);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for m in 1..=n {
        coeffs[m] = p24[m - 1].clone();
    }
    let out = QExpansion { weight: 12, coeffs };

    let check = n.min(512);
    let eis = delta_from_eisenstein(check);
    assert_eq!(&out.coeffs[..=check], eis.coeffs(), "Δ constructions disagree");
    out
}

/// Δ = (E₄³ − E₆²)/1728, exact division asserted.
pub(crate) fn delta_from_eisenstein(n: usize) -> QExpansion {
    let e4 = eisenstein(4, n);
    let e6 = eisenstein(6, n);
    let diff = e4.pow(3).sub(&e6.pow(2));
    let denom = BigInt::from(1728);
    let coeffs = diff
        .coeffs
        .iter()
        .map(|c| {
            let (q, r) = num_integer::Integer::div_rem(c, &denom);
            assert!(r.is_zero(), "E₄³ − E₆² not divisible by 1728");
            q
        })
        .collect();
    QExpansion { weight: 12, coeffs }
}
