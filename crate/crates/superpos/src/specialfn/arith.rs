//! Exact arithmetic ingredients: the generalized divisor function η_ν,
//! Kloosterman sums, and a sieve table of the standard multiplicative
//! functions.

use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::PI;

/// η_ν(n) = Σ_{ad=n} (a/d)^ν, the generalized divisor function. Symmetric
/// under ν → -ν, and η_0(n) = τ(n).
pub fn divisor_eta(nu: Complex64, n: u64) -> Complex64 {
    assert!(n >= 1, "divisor_eta needs n >= 1");
    let mut sum = Complex64::new(0.0, 0.0);
    let mut a = 1u64;
    while a * a <= n {
        if n % a == 0 {
            let d = n / a;
            let lr = (a as f64 / d as f64).ln();
            sum += (nu * lr).exp();
            if a != d {
                sum += (-nu * lr).exp();
            }
        }
        a += 1;
    }
    sum
}

fn modular_inverse(a: u64, c: u64) -> u64 {
    let eg = (a as i64).extended_gcd(&(c as i64));
    debug_assert_eq!(eg.gcd, 1);
    eg.x.rem_euclid(c as i64) as u64
}

/// Kloosterman sum S(m, n; c) = Σ_{x mod c, (x,c)=1} e((mx + n·x̄)/c),
/// by direct enumeration with modular inverses. The sum is real (x ↔ x̄
/// pairs with -x); the accumulated imaginary part is asserted below
/// 1e-9·c as a self-check of the enumeration.
pub fn kloosterman(m: i64, n: i64, c: u64) -> f64 {
    assert!((1..=1_000_000).contains(&c), "kloosterman needs 1 <= c <= 1e6");
    if c == 1 {
        return 1.0;
    }
    let mr = m.rem_euclid(c as i64) as u64;
    let nr = n.rem_euclid(c as i64) as u64;
    let cf = c as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for x in 1..c {
        if x.gcd(&c) != 1 {
            continue;
        }
        let xinv = modular_inverse(x, c);
        let e = (mr * x + nr * xinv) % c;
        let ang = 2.0 * PI * (e as f64) / cf;
        re += ang.cos();
        im += ang.sin();
    }
    assert!(
        im.abs() < 1e-9 * cf,
        "Kloosterman sum S({m},{n};{c}) has imaginary part {im}"
    );
    re
}

/// Sieve of the standard multiplicative functions up to a fixed limit,
/// built once and then read concurrently.
pub struct ArithmeticTable {
    spf: Vec<u32>,
    mu: Vec<i8>,
    phi: Vec<u64>,
    tau: Vec<u32>,
    rad: Vec<u64>,
}

impl ArithmeticTable {
    pub fn new(limit: usize) -> Self {
        assert!(limit >= 1);
        let n = limit + 1;
        let mut spf = vec![0u32; n];
        let mut primes: Vec<usize> = Vec::new();
        // Linear sieve for smallest prime factors.
        for i in 2..n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i);
            }
            for &p in &primes {
                if p > spf[i] as usize || i * p >= n {
                    break;
                }
                spf[i * p] = p as u32;
            }
        }
        let mut mu = vec![0i8; n];
        let mut phi = vec![0u64; n];
        let mut tau = vec![0u32; n];
        let mut rad = vec![0u64; n];
        let mut exp = vec![0u32; n];
        if limit >= 1 {
            mu[1] = 1;
            phi[1] = 1;
            tau[1] = 1;
            rad[1] = 1;
        }
        for i in 2..n {
            let p = spf[i] as usize;
            let m = i / p;
            if m % p == 0 {
                exp[i] = exp[m] + 1;
                mu[i] = 0;
                phi[i] = phi[m] * p as u64;
                tau[i] = tau[m] / (exp[m] + 1) * (exp[m] + 2);
                rad[i] = rad[m];
            } else {
                exp[i] = 1;
                mu[i] = -mu[m];
                phi[i] = phi[m] * (p as u64 - 1);
                tau[i] = tau[m] * 2;
                rad[i] = rad[m] * p as u64;
            }
        }
        ArithmeticTable { spf, mu, phi, tau, rad }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    fn at(&self, n: u64) -> usize {
        assert!(
            n >= 1 && n <= self.limit(),
            "n = {n} outside sieve range 1..={}",
            self.limit()
        );
        n as usize
    }

    pub fn mu(&self, n: u64) -> i64 {
        self.mu[self.at(n)] as i64
    }

    pub fn phi(&self, n: u64) -> u64 {
        self.phi[self.at(n)]
    }

    pub fn tau(&self, n: u64) -> u64 {
        self.tau[self.at(n)] as u64
    }

    pub fn rad(&self, n: u64) -> u64 {
        self.rad[self.at(n)]
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        self.mu[self.at(n)] != 0
    }

    /// Prime factorization (p, e) with p ascending.
    pub fn factor(&self, n: u64) -> Vec<(u64, u32)> {
        let mut m = self.at(n);
        let mut out = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    /// All divisors of n, sorted ascending.
    pub fn divisors(&self, n: u64) -> Vec<u64> {
        let mut out = vec![1u64];
        for (p, e) in self.factor(n) {
            let prev = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..prev {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}
