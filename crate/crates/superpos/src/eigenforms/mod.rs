//! Hecke eigenforms of level 1: exact construction (integer q-expansions,
//! exact T₂ matrices, numeric diagonalization only at the last step),
//! harmonic weights from the Petersson formula, and the weight-averaged
//! families the moment computations run over.

pub mod qexp;

mod basis;

pub use basis::{cusp_dim, echelon_basis};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::specialfn::{bessel_j, kloosterman, ln_gamma};
use crate::{Error, Result};

use num_complex::Complex64;

/// How a form's eigenvalues were obtained.  One-dimensional spaces never
/// leave integer arithmetic until the final normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    ExactInteger,
    NumericDiagonalization,
}

/// A normalized Hecke eigenform: λ_f(1) = 1, λ_f(n) real, together with its
/// root number ε = i^k and harmonic weight ω_f = 12ζ(2)/((k−1)L(1,sym²f)).
#[derive(Debug, Clone)]
pub struct HeckeEigenform {
    weight: u32,
    lambda: Vec<f64>,
    epsilon: i8,
    omega: f64,
    provenance: Provenance,
}

impl HeckeEigenform {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Sign of the functional equation: +1 for k ≡ 0 (mod 4), −1 otherwise.
    pub fn epsilon(&self) -> i32 {
        self.epsilon as i32
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Largest n with λ_f(n) stored.
    pub fn n_coeffs(&self) -> usize {
        self.lambda.len() - 1
    }

    /// Normalized eigenvalue λ_f(n).  Panics outside 1..=n_coeffs().
    pub fn lambda(&self, n: usize) -> f64 {
        assert!(n >= 1, "eigenvalues start at n = 1");
        self.lambda[n]
    }

    /// The symmetric-square value the harmonic weight encodes:
    /// L(1, sym²f) = 12ζ(2)/((k−1)ω_f) = 2π²/((k−1)ω_f).
    pub fn sym_square_l1(&self) -> f64 {
        2.0 * PI * PI / ((self.weight - 1) as f64 * self.omega)
    }
}

/// The Hecke eigenbasis of S_k with eigenvalues λ_f(n) for n ≤ `n_coeffs`,
/// sorted by λ_f(2) ascending.  Empty for weights without cusp forms.
pub fn hecke_basis(k: u32, n_coeffs: usize) -> Result<Vec<HeckeEigenform>> {
    if k % 2 != 0 || !(12..=130).contains(&k) {
        return Err(Error::OutOfRange(format!("weight k = {k} (even, 12..=130)")));
    }
    if n_coeffs > 4000 {
        return Err(Error::OutOfRange(format!("n_coeffs = {n_coeffs} (ceiling 4000)")));
    }
    let d = cusp_dim(k);
    if d == 0 {
        return Ok(Vec::new());
    }
    let need = (2 * d).max(2);
    if n_coeffs < need {
        return Err(Error::InsufficientCoefficients { required: need, available: n_coeffs });
    }
    let basis = echelon_basis(k, n_coeffs)?;
    let s = (k - 1) as f64 / 2.0;
    let epsilon: i8 = if k % 4 == 0 { 1 } else { -1 };

    let vectors: Vec<Vec<f64>> = if d == 1 {
        vec![vec![1.0]]
    } else {
        let m2 = basis::hecke_matrix(k, &basis, 2);
        let cp = basis::char_poly(&m2);
        basis::scaled_roots(&cp, k)?
            .into_iter()
            .map(|y| basis::balanced_eigenvector(&m2, k, y))
            .collect::<Result<_>>()?
    };

    let mut lambdas: Vec<Vec<f64>> = Vec::with_capacity(d);
    for u in &vectors {
        let mut lam = vec![0.0; n_coeffs + 1];
        for (n, slot) in lam.iter_mut().enumerate().skip(1) {
            let log2n = (n as f64).log2();
            *slot = u
                .iter()
                .enumerate()
                .map(|(i, ui)| {
                    ui * basis::big_scaled(
                        basis[i].coeff(n),
                        s * (((i + 1) as f64).log2() - log2n),
                    )
                })
                .sum();
        }
        lambdas.push(lam);
    }

    let omegas = if d == 1 {
        vec![petersson_rhs(1, 1, k)?]
    } else {
        weight_system(k, &lambdas)?
    };
    for w in &omegas {
        if !(*w > 0.0) {
            return Err(Error::Invalid(format!("nonpositive harmonic weight {w} at k = {k}")));
        }
    }

    let provenance = if d == 1 {
        Provenance::ExactInteger
    } else {
        Provenance::NumericDiagonalization
    };
    Ok(lambdas
        .into_iter()
        .zip(omegas)
        .map(|(lambda, omega)| HeckeEigenform { weight: k, lambda, epsilon, omega, provenance })
        .collect())
}

/// The harmonic weight recomputed from scratch (Petersson formula); for
/// spaces with dim > 1 the whole weight system is rebuilt and the form is
/// matched by λ_f(2).  Serves as an independent check of a stored ω_f.
pub fn harmonic_weight(f: &HeckeEigenform) -> Result<f64> {
    let k = f.weight;
    let d = cusp_dim(k);
    if d > 12 {
        return Err(Error::OutOfRange(format!("dim S_{k} = {d} > 12")));
    }
    if d <= 1 {
        return petersson_rhs(1, 1, k);
    }
    let space = hecke_basis(k, 2 * d)?;
    space
        .iter()
        .find(|g| (g.lambda(2) - f.lambda(2)).abs() < 1e-6)
        .map(|g| g.omega)
        .ok_or_else(|| {
            Error::Invalid(format!("no form with λ(2) = {} in weight {k}", f.lambda(2)))
        })
}

/// Right side of the Petersson trace formula:
/// δ_{m,n} + 2π i^{−k} Σ_c S(m,n;c)/c · J_{k−1}(4π√(mn)/c).
/// The c-sum is truncated once the Bessel bound (x/2)^ν/ν! (with |S| ≤ c)
/// certifies a tail below 10⁻¹⁶.
fn petersson_rhs(m: u64, n: u64, k: u32) -> Result<f64> {
    let nu = (k - 1) as usize;
    let sqrt_mn = ((m * n) as f64).sqrt();
    let sign = if k % 4 == 0 { 1.0 } else { -1.0 };
    let ln_nu_fact = ln_gamma(Complex64::new(k as f64, 0.0))?.re;
    let mut sum = 0.0;
    let mut c = 1u64;
    loop {
        let x = 4.0 * PI * sqrt_mn / c as f64;
        sum += kloosterman(m as i64, n as i64, c) / c as f64 * bessel_j(nu, x)?;
        if x < 1.0 {
            // per-term bound with |S(m,n;c)| ≤ c; the tail sums a further
            // factor ≤ c against the (1/c)^ν decay
            let ln_bound = nu as f64 * (x / 2.0).ln() - ln_nu_fact + ((2 * c) as f64).ln();
            if ln_bound < -37.0 {
                break;
            }
        }
        c += 1;
        if c > 1_000_000 {
            return Err(Error::TailUnverifiable { estimate: sum.abs(), needed: 1e-16 });
        }
    }
    Ok((if m == n { 1.0 } else { 0.0 }) + 2.0 * PI * sign * sum)
}

/// Harmonic weights of a dim-d space by least squares over the Petersson
/// relations at all pairs 1 ≤ m ≤ n ≤ d+2 (normal equations; the residual
/// certifies the fit).
fn weight_system(k: u32, lambdas: &[Vec<f64>]) -> Result<Vec<f64>> {
    let d = lambdas.len();
    let top = d + 2;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for m in 1..=top {
        for n in m..=top {
            rows.push((0..d).map(|f| lambdas[f][m] * lambdas[f][n]).collect());
            rhs.push(petersson_rhs(m as u64, n as u64, k)?);
        }
    }
    let gram: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| rows.iter().map(|r| r[i] * r[j]).sum())
                .collect()
        })
        .collect();
    let g_rhs: Vec<f64> = (0..d)
        .map(|i| rows.iter().zip(&rhs).map(|(r, b)| r[i] * b).sum())
        .collect();
    let (w, _cond) = basis::solve_linear(gram, &g_rhs)?;
    let residual = rows
        .iter()
        .zip(&rhs)
        .map(|(r, b)| (r.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>() - b).abs())
        .fold(0.0f64, f64::max);
    if residual > 1e-8 {
        return Err(Error::WeightResidual { weight: k, residual, tol: 1e-8 });
    }
    Ok(w)
}

/// Which functional-equation sign a family collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// k ≡ 0 (mod 4): even functional equation (ε = +1).
    Plus,
    /// k ≡ 2 (mod 4): odd functional equation (ε = −1).
    Minus,
}

impl Parity {
    fn residue(self) -> u32 {
        match self {
            Parity::Plus => 0,
            Parity::Minus => 2,
        }
    }
}

/// All eigenforms with K ≤ k ≤ 2K of the declared residue mod 4, grouped by
/// weight (dimension-zero weights omitted).
#[derive(Debug, Clone)]
pub struct HarmonicFamily {
    scale: f64,
    parity: Parity,
    groups: Vec<(u32, Vec<HeckeEigenform>)>,
}

impl HarmonicFamily {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn groups(&self) -> &[(u32, Vec<HeckeEigenform>)] {
        &self.groups
    }

    pub fn forms(&self) -> impl Iterator<Item = &HeckeEigenform> {
        self.groups.iter().flat_map(|(_, fs)| fs.iter())
    }
}

/// Build the family ℋ(K) for the given parity, with eigenvalues to
/// `n_coeffs` per form.
pub fn harmonic_family(scale: f64, parity: Parity, n_coeffs: usize) -> Result<HarmonicFamily> {
    if !(scale >= 10.0) {
        return Err(Error::OutOfRange(format!("family scale K = {scale} (need ≥ 10)")));
    }
    let lo = scale.ceil() as u32;
    let hi = (2.0 * scale).floor() as u32;
    let mut groups = Vec::new();
    for k in lo..=hi {
        if k % 4 != parity.residue() {
            continue;
        }
        let forms = hecke_basis(k, n_coeffs)?;
        if !forms.is_empty() {
            groups.push((k, forms));
        }
    }
    Ok(HarmonicFamily { scale, parity, groups })
}

/// CSV rows `k,form,n,lambda,omega` (header included): `form` is the
/// 0-based index within the weight after the λ(2) sort, `n` runs
/// 1..=n_coeffs.  Floats use the shortest round-trip representation.
pub fn to_csv(forms: &[HeckeEigenform], n_coeffs: usize) -> String {
    let mut out = String::from("k,form,n,lambda,omega\n");
    for (fi, f) in forms.iter().enumerate() {
        let n_max = n_coeffs.min(f.n_coeffs());
        for n in 1..=n_max {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                f.weight,
                fi,
                n,
                f.lambda(n),
                f.omega
            ));
        }
    }
    out
}

/// Rebuild forms from [`to_csv`] output.  Round-trips bit-exactly.
pub fn from_csv(text: &str) -> Result<Vec<HeckeEigenform>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Invalid("empty CSV".into()))?;
    if header.trim() != "k,form,n,lambda,omega" {
        return Err(Error::Invalid(format!("unexpected CSV header `{header}`")));
    }
    let mut forms: Vec<HeckeEigenform> = Vec::new();
    let mut current: Option<(u32, usize)> = None;
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Invalid(format!("CSV row {}: expected 5 fields", ln + 2)));
        }
        let parse_err = |what: &str| Error::Invalid(format!("CSV row {}: bad {what}", ln + 2));
        let k: u32 = fields[0].parse().map_err(|_| parse_err("weight"))?;
        let fi: usize = fields[1].parse().map_err(|_| parse_err("form index"))?;
        let n: usize = fields[2].parse().map_err(|_| parse_err("index"))?;
        let lam: f64 = fields[3].parse().map_err(|_| parse_err("lambda"))?;
        let omega: f64 = fields[4].parse().map_err(|_| parse_err("omega"))?;
        if current != Some((k, fi)) {
            current = Some((k, fi));
            let provenance = if cusp_dim(k) == 1 {
                Provenance::ExactInteger
            } else {
                Provenance::NumericDiagonalization
            };
            forms.push(HeckeEigenform {
                weight: k,
                lambda: vec![0.0],
                epsilon: if k % 4 == 0 { 1 } else { -1 },
                omega,
                provenance,
            });
        }
        let f = forms.last_mut().unwrap();
        if n != f.lambda.len() || omega != f.omega {
            return Err(Error::Invalid(format!("CSV row {}: out of sequence", ln + 2)));
        }
        f.lambda.push(lam);
    }
    Ok(forms)
}

#[derive(Serialize, Deserialize)]
struct FormRecord {
    k: u32,
    epsilon: i32,
    omega: f64,
    provenance: Provenance,
    lambda: Vec<f64>,
}

/// JSON export: array of `{k, epsilon, omega, provenance, lambda}` with
/// `lambda[i]` = λ_f(i+1).
pub fn to_json(forms: &[HeckeEigenform], n_coeffs: usize) -> Result<String> {
    let records: Vec<FormRecord> = forms
        .iter()
        .map(|f| FormRecord {
            k: f.weight,
            epsilon: f.epsilon(),
            omega: f.omega,
            provenance: f.provenance,
            lambda: (1..=n_coeffs.min(f.n_coeffs())).map(|n| f.lambda(n)).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&records).map_err(|e| Error::Invalid(e.to_string()))
}

/// Rebuild forms from [`to_json`] output.  Round-trips bit-exactly.
pub fn from_json(text: &str) -> Result<Vec<HeckeEigenform>> {
    let records: Vec<FormRecord> =
        serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(records
        .into_iter()
        .map(|r| {
            let mut lambda = vec![0.0];
            lambda.extend(r.lambda);
            HeckeEigenform {
                weight: r.k,
                lambda,
                epsilon: if r.epsilon >= 0 { 1 } else { -1 },
                omega: r.omega,
                provenance: r.provenance,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_twelve_exact() {
        let forms = hecke_basis(12, 30).unwrap();
        assert_eq!(forms.len(), 1);
        let f = &forms[0];
        assert_eq!(f.lambda(1), 1.0);
        // τ(2)/2^{11/2} = −24/2^{5.5}
        assert!((f.lambda(2) - -0.5303300858899106).abs() < 1e-14);
        assert_eq!(f.epsilon(), 1);
        assert_eq!(f.provenance(), Provenance::ExactInteger);
    }

    #[test]
    fn empty_weight_fourteen() {
        assert!(hecke_basis(14, 10).unwrap().is_empty());
    }

    #[test]
    fn argument_validation() {
        assert!(matches!(hecke_basis(13, 10), Err(Error::OutOfRange(_))));
        assert!(matches!(hecke_basis(132, 10), Err(Error::OutOfRange(_))));
        assert!(matches!(
            hecke_basis(24, 3),
            Err(Error::InsufficientCoefficients { required: 4, .. })
        ));
    }

    #[test]
    fn spectra_match_oracle() {
        // 50-digit oracle: λ(2) ascending and the harmonic weights.
        let forms24 = hecke_basis(24, 10).unwrap();
        let lam24: Vec<f64> = forms24.iter().map(|f| f.lambda(2)).collect();
        assert!((lam24[0] - -1.3867134517319789).abs() < 1e-12);
        assert!((lam24[1] - 1.7596017933733223).abs() < 1e-12);
        assert!((forms24[0].omega() - 0.54472054371308781).abs() < 1e-9);
        assert!((forms24[1].omega() - 0.45538030898903250).abs() < 1e-9);

        let forms38 = hecke_basis(38, 12).unwrap();
        assert!((forms38[0].lambda(2) - -1.2958618507266847).abs() < 1e-12);
        assert!((forms38[1].lambda(2) - 0.7714876202935455).abs() < 1e-12);
        assert!((forms38[0].omega() - 0.37317717101730404).abs() < 1e-9);
        assert!((forms38[1].omega() - 0.62682282898264168).abs() < 1e-9);
        assert!((forms38[0].lambda(3) - 0.051542918652276997).abs() < 1e-11);
        assert!((forms38[0].lambda(5) - 1.6209685528498411).abs() < 1e-11);
        assert!((forms38[0].lambda(12) - 0.035010936547861418).abs() < 1e-11);
        assert!((forms38[1].lambda(3) - -0.030692347281644790).abs() < 1e-11);
        assert!((forms38[1].lambda(5) - -0.97271126199674767).abs() < 1e-11);
        assert!((forms38[1].lambda(12) - 0.012424472475403150).abs() < 1e-11);
        assert_eq!(forms38[0].epsilon(), -1);
    }

    #[test]
    fn weight_sum_near_one_at_large_k() {
        // Σ_f ω_f = 1 + O(2^{−k}), genuinely tiny at k = 40.
        let forms = hecke_basis(40, 10).unwrap();
        assert_eq!(forms.len(), 3);
        let total: f64 = forms.iter().map(|f| f.omega()).sum();
        assert!((total - 1.0).abs() < 1e-9, "Σω = {total}");
        assert!((forms[0].omega() - 0.41197070877187397).abs() < 1e-9);
        assert!((forms[1].omega() - 0.37159198948189328).abs() < 1e-9);
        assert!((forms[2].omega() - 0.21643730174623428).abs() < 1e-9);
        for f in &forms {
            assert!(f.omega() > 0.0);
        }
    }

    #[test]
    fn discriminant_weight_from_two_petersson_instances() {
        // (1,1) and (2,2) instances must give the same ω_Δ; the value itself
        // is frozen from a 50-digit evaluation of the trace formula.
        let w11 = petersson_rhs(1, 1, 12).unwrap();
        let lam2 = -24.0 / 2.0f64.powf(5.5);
        let w22 = petersson_rhs(2, 2, 12).unwrap() / (lam2 * lam2);
        assert!((w11 - w22).abs() < 1e-9, "{w11} vs {w22}");
        assert!((w11 - 2.8402873751675003).abs() < 1e-10);
        let f = &hecke_basis(12, 10).unwrap()[0];
        assert!((f.omega() - w11).abs() < 1e-13);
        assert!((f.sym_square_l1() - 0.63179294572788324).abs() < 1e-10);
    }

    #[test]
    fn recomputed_weight_matches_stored() {
        for f in hecke_basis(24, 10).unwrap() {
            assert!((harmonic_weight(&f).unwrap() - f.omega()).abs() < 1e-12);
        }
    }

    #[test]
    fn deligne_bound_at_k38() {
        let forms = hecke_basis(38, 100).unwrap();
        let primes = [
            2usize, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
            73, 79, 83, 89, 97,
        ];
        for f in &forms {
            for &p in &primes {
                assert!(f.lambda(p).abs() <= 2.0, "k=38 λ({p}) = {}", f.lambda(p));
            }
        }
    }

    #[test]
    fn hecke_relation_numeric_k38() {
        let forms = hecke_basis(38, 400).unwrap();
        for f in &forms {
            for m in 1usize..=20 {
                for n in 1..=20 {
                    let mut rhs = 0.0;
                    for d in 1..=m.min(n) {
                        if m % d == 0 && n % d == 0 {
                            rhs += f.lambda(m * n / (d * d));
                        }
                    }
                    let lhs = f.lambda(m) * f.lambda(n);
                    assert!((lhs - rhs).abs() < 1e-9, "m={m} n={n}: {lhs} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn family_collects_the_right_weights() {
        let fam = harmonic_family(12.0, Parity::Minus, 10).unwrap();
        let ks: Vec<u32> = fam.groups().iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![18, 22]); // k=14 has no forms; 12 ≤ k ≤ 24, k ≡ 2 (4)
        for f in fam.forms() {
            assert_eq!(f.weight() % 4, 2);
            assert_eq!(f.epsilon(), -1);
        }
        assert!(matches!(
            harmonic_family(8.0, Parity::Minus, 10),
            Err(Error::OutOfRange(_))
        ));
        let plus = harmonic_family(12.0, Parity::Plus, 10).unwrap();
        let ks: Vec<u32> = plus.groups().iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![12, 16, 20, 24]);
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let forms = hecke_basis(24, 10).unwrap();
        let text = to_csv(&forms, 10);
        assert_eq!(text.lines().count(), 1 + 2 * 10);
        let back = from_csv(&text).unwrap();
        assert_eq!(back.len(), forms.len());
        for (a, b) in forms.iter().zip(&back) {
            assert_eq!(a.weight(), b.weight());
            assert_eq!(a.epsilon(), b.epsilon());
            assert_eq!(a.provenance(), b.provenance());
            assert_eq!(a.omega().to_bits(), b.omega().to_bits());
            for n in 1..=10 {
                assert_eq!(a.lambda(n).to_bits(), b.lambda(n).to_bits(), "n = {n}");
            }
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let forms = hecke_basis(38, 8).unwrap();
        let text = to_json(&forms, 8).unwrap();
        let back = from_json(&text).unwrap();
        for (a, b) in forms.iter().zip(&back) {
            assert_eq!(a.weight(), b.weight());
            assert_eq!(a.epsilon(), b.epsilon());
            assert_eq!(a.provenance(), b.provenance());
            assert_eq!(a.omega().to_bits(), b.omega().to_bits());
            for n in 1..=8 {
                assert_eq!(a.lambda(n).to_bits(), b.lambda(n).to_bits());
            }
        }
    }
}
