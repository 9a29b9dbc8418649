//! Certificates for both answers to "is this polynomial real-rooted?".
//!
//! * A polynomial with a non-real root gets a [`NegativeWitness`]: a real
//!   point `x` with `Φ_m(x) = -2μ < 0`, where `μ` is the multiplicity of the
//!   chosen non-real root. The point is the coefficient vector of a real
//!   polynomial `p` interpolating `p(λ₁) = e^{iπ/m}`, `p(λ̄₁) = e^{-iπ/m}` and
//!   `p = 0` at every other distinct root.
//! * A real-rooted polynomial gets a [`PsdCertificate`]: `Φ_m` written as a
//!   weighted sum of m-th powers of real linear forms, one per distinct root.
//!
//! Both are verified against the exactly constructed form before they are
//! returned.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{build_form_exact, exponent_vectors, linear_forms, multinomial, ExactForm, IMAGINARY_TOLERANCE};
use crate::poly::Polynomial;
use crate::psd::classify_real_rooted;
use crate::rational::to_f64;
use crate::roots::{numeric_roots, RootSpectrum};

/// Default relative tolerance on `|Φ_m(x) + 2μ|`, scaled by `1 + 2μ`.
pub const WITNESS_TOLERANCE: f64 = 1e-6;

/// Default tolerance on the coefficient deviation of a re-expanded
/// decomposition, scaled by the magnitude of the summands.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub witness: f64,
    pub certificate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            witness: WITNESS_TOLERANCE,
            certificate: CERTIFICATE_TOLERANCE,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            witness: tol,
            certificate: tol,
        }
    }
}

/// A real polynomial interpolating conjugate-symmetric data on the distinct
/// roots of a spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessPolynomial {
    /// Ascending real coefficients, one per distinct root.
    pub coeffs: Vec<f64>,
    pub lambda1: Complex64,
    pub multiplicity: usize,
    /// Largest imaginary part discarded from the solved coefficients.
    pub max_imaginary: f64,
    /// Largest `|p(λ) - target|` over the distinct roots, after the
    /// imaginary parts were dropped.
    pub interpolation_residual: f64,
}

impl WitnessPolynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Degree of the interpolant (`None` if identically zero).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    /// The exact rational polynomial with these double coefficients.
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|&c| crate::rational::from_f64(c).expect("finite coefficient"))
                .collect(),
        )
    }
}

/// Index of the non-real root with the largest imaginary part, ties broken by
/// the smallest real part.
pub fn select_lambda1(spectrum: &RootSpectrum) -> Option<usize> {
    spectrum
        .roots()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.value.im > 0.0)
        .max_by(|(_, a), (_, b)| {
            a.value
                .im
                .total_cmp(&b.value.im)
                .then(b.value.re.total_cmp(&a.value.re))
        })
        .map(|(i, _)| i)
}

/// Solves the r x r Vandermonde system `Σ_j c_j λ_ℓ^j = target_ℓ` for
/// `p(λ₁) = ω`, `p(λ̄₁) = ω̄` and `p = 0` at every other distinct root.
pub fn interpolate_witness_poly(spectrum: &RootSpectrum, omega: Complex64) -> Result<WitnessPolynomial> {
    let first = select_lambda1(spectrum).ok_or(Error::RealRooted)?;
    let lambda1 = spectrum.roots()[first].value;
    let nodes: Vec<Complex64> = spectrum.roots().iter().map(|r| r.value).collect();
    let targets: Vec<Complex64> = nodes
        .iter()
        .map(|&z| {
            if z == lambda1 {
                omega
            } else if z == lambda1.conj() {
                omega.conj()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let r = nodes.len();
    let vandermonde: Vec<Vec<Complex64>> = nodes
        .iter()
        .map(|&z| {
            let mut row = Vec::with_capacity(r);
            let mut power = Complex64::new(1.0, 0.0);
            for _ in 0..r {
                row.push(power);
                power *= z;
            }
            row
        })
        .collect();

    let mut solution = solve(&vandermonde, &targets)?;
    // One round of iterative refinement.
    let residual: Vec<Complex64> = (0..r)
        .map(|i| targets[i] - dot_row(&vandermonde[i], &solution))
        .collect();
    let correction = solve(&vandermonde, &residual)?;
    for (s, c) in solution.iter_mut().zip(correction) {
        *s += c;
    }

    let max_abs = solution.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let max_imaginary = solution.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    let tolerance = IMAGINARY_TOLERANCE * (1.0 + max_abs);
    if max_imaginary > tolerance {
        return Err(Error::ImaginaryResidue {
            residue: max_imaginary,
            tolerance,
        });
    }
    let mut poly = WitnessPolynomial {
        coeffs: solution.iter().map(|c| c.re).collect(),
        lambda1,
        multiplicity: spectrum.roots()[first].multiplicity,
        max_imaginary,
        interpolation_residual: 0.0,
    };
    poly.interpolation_residual = nodes
        .iter()
        .zip(&targets)
        .map(|(&z, &t)| (poly.eval(z) - t).norm())
        .fold(0.0, f64::max);
    Ok(poly)
}

fn dot_row(row: &[Complex64], x: &[Complex64]) -> Complex64 {
    row.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Gaussian elimination with partial pivoting.
fn solve(matrix: &[Vec<Complex64>], rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<Complex64>> = matrix.to_vec();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("nonempty column");
        if a[pivot][col].norm() < 1e-300 {
            return Err(Error::IllConditioned("interpolation nodes coincide".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor.norm() == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (target, pivot_entry) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target -= factor * pivot_entry;
            }
            let delta = factor * b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let tail: Complex64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    if x.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::IllConditioned("interpolation system is singular".into()));
    }
    Ok(x)
}

/// A real point where `Φ_m` is negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeWitness {
    pub m: u32,
    pub x: Vec<f64>,
    /// The value the construction guarantees, `-2μ`.
    pub claimed_value: f64,
    pub mu: usize,
    /// `|Φ_m(x) - claimed_value|`, with `Φ_m(x)` evaluated exactly.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub weight: usize,
    pub coeffs: Vec<f64>,
}

/// `Φ_m = Σ weight · (coeffs · x)^m` with real rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdCertificate {
    pub m: u32,
    pub rows: Vec<CertificateRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    NegativeWitness(NegativeWitness),
    #[serde(rename = "psd_decomposition")]
    PsdDecomposition(PsdCertificate),
}

impl Certificate {
    pub fn m(&self) -> u32 {
        match self {
            Certificate::NegativeWitness(w) => w.m,
            Certificate::PsdDecomposition(c) => c.m,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn require_even(m: u32) -> Result<()> {
    match m {
        0 => Err(Error::ZeroFormDegree),
        m if m % 2 == 1 => Err(Error::OddFormDegree(m)),
        _ => Ok(()),
    }
}

/// Builds and verifies a negative witness for `Φ_m`.
///
/// Fails with [`Error::RealRooted`] if every root is real, and with
/// [`Error::VerificationFailed`] if the numerically built point does not
/// evaluate to `-2μ` within `tol.witness · (1 + 2μ)`.
pub fn negative_witness(f: &Polynomial, m: u32, tol: &Tolerances) -> Result<NegativeWitness> {
    require_even(m)?;
    let n = f.analysis_degree()?;
    if classify_real_rooted(f)? {
        return Err(Error::RealRooted);
    }
    let spectrum = numeric_roots(f)?;
    if spectrum.is_real_rooted() {
        return Err(Error::IllConditioned(
            "exact test found non-real roots but the numeric spectrum is real".into(),
        ));
    }
    let omega = Complex64::from_polar(1.0, PI / f64::from(m));
    let p = interpolate_witness_poly(&spectrum, omega)?;
    let mut x = p.coeffs.clone();
    x.resize(n, 0.0);

    let form = build_form_exact(f, m)?;
    let mu = p.multiplicity;
    let claimed_value = -2.0 * mu as f64;
    let value = to_f64(&form.evaluate_at_f64(&x)?);
    let residual = (value - claimed_value).abs();
    let bound = tol.witness * (1.0 + 2.0 * mu as f64);
    if !(value < 0.0 && residual <= bound) {
        return Err(Error::VerificationFailed(format!(
            "Φ_{m}(x) = {value:e}, expected {claimed_value} within {bound:e}"
        )));
    }
    Ok(NegativeWitness {
        m,
        x,
        claimed_value,
        mu,
        residual,
    })
}

/// Builds and verifies the sum-of-even-powers decomposition of `Φ_m`.
pub fn psd_certificate(f: &Polynomial, m: u32, tol: &Tolerances) -> Result<PsdCertificate> {
    require_even(m)?;
    let n = f.analysis_degree()?;
    if !classify_real_rooted(f)? {
        return Err(Error::NotRealRooted);
    }
    let rows = match f.rational_roots() {
        Some(roots) => roots
            .iter()
            .map(|(root, mu)| {
                let mut coeffs = Vec::with_capacity(n);
                let mut power = num_rational::BigRational::from_integer(1.into());
                for _ in 0..n {
                    coeffs.push(to_f64(&power));
                    power *= root;
                }
                CertificateRow { weight: *mu, coeffs }
            })
            .collect(),
        None => {
            let spectrum = numeric_roots(f)?;
            if !spectrum.is_real_rooted() {
                return Err(Error::IllConditioned(
                    "exact test found only real roots but the numeric spectrum is not real".into(),
                ));
            }
            linear_forms(&spectrum)
                .into_iter()
                .map(|row| CertificateRow {
                    weight: row.weight,
                    coeffs: row.coeffs.iter().map(|c| c.re).collect(),
                })
                .collect()
        }
    };
    let cert = PsdCertificate { m, rows };
    let form = build_form_exact(f, m)?;
    let deviation = decomposition_deviation(&form, &cert)?;
    if deviation > tol.certificate {
        return Err(Error::VerificationFailed(format!(
            "decomposition deviates from Φ_{m} by {deviation:e} (tolerance {:e})",
            tol.certificate
        )));
    }
    Ok(cert)
}

/// Largest coefficient deviation between `Σ w (row · x)^m` and `form`, each
/// divided by `1 + Σ w |multinomial · row^α|`.
pub fn decomposition_deviation(form: &ExactForm, cert: &PsdCertificate) -> Result<f64> {
    let n = form.nvars();
    let m = form.degree();
    for row in &cert.rows {
        if row.coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: row.coeffs.len(),
            });
        }
    }
    let powers: Vec<Vec<Vec<f64>>> = cert
        .rows
        .iter()
        .map(|row| {
            row.coeffs
                .iter()
                .map(|&c| (0..=m as i32).map(|e| c.powi(e)).collect())
                .collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for exps in exponent_vectors(n, m) {
        let weight = to_f64(&num_rational::BigRational::from_integer(multinomial(&exps)));
        let mut value = 0.0;
        let mut scale = 0.0;
        for (row, pw) in cert.rows.iter().zip(&powers) {
            let product = exps
                .iter()
                .enumerate()
                .fold(1.0, |acc, (j, &e)| acc * pw[j][e as usize]);
            value += row.weight as f64 * product;
            scale += row.weight as f64 * product.abs();
        }
        let exact = form.coeff(&exps).map_or(0.0, to_f64);
        worst = worst.max((weight * value - exact).abs() / (1.0 + weight * scale));
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    NegativeWitness,
    PsdDecomposition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: CertificateKind,
    pub passed: bool,
    /// `Φ_m(x)` for a witness (exact, rounded); absent for decompositions.
    pub value: Option<f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub message: String,
}

/// Re-checks a certificate against `Φ_m` built exactly from `f`.
pub fn verify_certificate(f: &Polynomial, cert: &Certificate, tol: &Tolerances) -> VerificationReport {
    match cert {
        Certificate::NegativeWitness(w) => verify_witness(f, w, tol),
        Certificate::PsdDecomposition(c) => verify_decomposition(f, c, tol),
    }
}

fn verify_witness(f: &Polynomial, w: &NegativeWitness, tol: &Tolerances) -> VerificationReport {
    let bound = tol.witness * (1.0 + 2.0 * w.mu as f64);
    let fail = |message: String| VerificationReport {
        kind: CertificateKind::NegativeWitness,
        passed: false,
        value: None,
        residual: f64::INFINITY,
        tolerance: bound,
        message,
    };
    if let Err(e) = require_even(w.m) {
        return fail(e.to_string());
    }
    if w.mu == 0 {
        return fail("multiplicity must be positive".into());
    }
    let evaluated = build_form_exact(f, w.m).and_then(|form| form.evaluate_at_f64(&w.x));
    let value = match evaluated {
        Ok(v) => to_f64(&v),
        Err(e) => return fail(e.to_string()),
    };
    let target = -2.0 * w.mu as f64;
    let residual = (value - target).abs();
    let claim_ok = (w.claimed_value - target).abs() <= bound;
    let passed = value < 0.0 && residual <= bound && claim_ok;
    let message = if passed {
        format!("Φ_{}(x) = {value} < 0", w.m)
    } else if value >= 0.0 {
        format!("Φ_{}(x) = {value} is not negative", w.m)
    } else if !claim_ok {
        format!("claimed value {} is not -2μ = {target}", w.claimed_value)
    } else {
        format!("Φ_{}(x) = {value} is not within {bound:e} of -2μ = {target}", w.m)
    };
    VerificationReport {
        kind: CertificateKind::NegativeWitness,
        passed,
        value: Some(value),
        residual,
        tolerance: bound,
        message,
    }
}

fn verify_decomposition(f: &Polynomial, c: &PsdCertificate, tol: &Tolerances) -> VerificationReport {
    let report = |passed: bool, residual: f64, message: String| VerificationReport {
        kind: CertificateKind::PsdDecomposition,
        passed,
        value: None,
        residual,
        tolerance: tol.certificate,
        message,
    };
    if let Err(e) = require_even(c.m) {
        return report(false, f64::INFINITY, e.to_string());
    }
    if c.rows.is_empty() || c.rows.iter().any(|r| r.weight == 0) {
        return report(false, f64::INFINITY, "rows must be nonempty with positive weights".into());
    }
    if c.rows.iter().flat_map(|r| &r.coeffs).any(|v| !v.is_finite()) {
        return report(false, f64::INFINITY, "non-finite row entry".into());
    }
    let n = match f.analysis_degree() {
        Ok(n) => n,
        Err(e) => return report(false, f64::INFINITY, e.to_string()),
    };
    let total: usize = c.rows.iter().map(|r| r.weight).sum();
    if total != n {
        return report(
            false,
            f64::INFINITY,
            format!("weights sum to {total}, expected the degree {n}"),
        );
    }
    let deviation = build_form_exact(f, c.m).and_then(|form| decomposition_deviation(&form, c));
    match deviation {
        Ok(d) if d <= tol.certificate => report(
            true,
            d,
            format!("Φ_{} equals the sum of {} even powers", c.m, c.rows.len()),
        ),
        Ok(d) => report(false, d, format!("coefficient deviation {d:e} exceeds tolerance")),
        Err(e) => report(false, f64::INFINITY, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::DistinctRoot;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    #[test]
    fn interpolant_for_cube_roots_of_unity() {
        let s = numeric_roots(&poly(&[1, 1, 1])).unwrap();
        let p = interpolate_witness_poly(&s, Complex64::i()).unwrap();
        let r3 = 3f64.sqrt();
        assert!((p.coeffs[0] - 1.0 / r3).abs() < 1e-14);
        assert!((p.coeffs[1] - 2.0 / r3).abs() < 1e-14);
        assert!((p.eval(p.lambda1.conj()) + Complex64::i()).norm() < 1e-14);
        assert!(p.lambda1.im > 0.0);
    }

    #[test]
    fn zero_data_gives_zero_interpolant() {
        let s = numeric_roots(&poly(&[1, 1, 1])).unwrap();
        let p = interpolate_witness_poly(&s, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(p.degree(), None);
        assert!(p.to_polynomial().is_zero());
    }

    #[test]
    fn interpolant_for_three_nodes() {
        // (t^2 + 1)(t - 1): p(i) = i, p(-i) = -i, p(1) = 0 forces
        // p(t) = (t - 1)(a t + b) with (i - 1)(a i + b) = i, giving
        // p(t) = -(t - 1)^2 / 2.
        let f = &poly(&[1, 0, 1]) * &poly(&[-1, 1]);
        let s = numeric_roots(&f).unwrap();
        let p = interpolate_witness_poly(&s, Complex64::i()).unwrap();
        assert!(p.degree().unwrap() <= 2);
        let expected = [-0.5, 1.0, -0.5];
        for (c, e) in p.coeffs.iter().zip(expected) {
            assert!((c - e).abs() < 1e-12, "{:?}", p.coeffs);
        }
        assert!((p.eval(Complex64::i()) - Complex64::i()).norm() < 1e-10);
        assert!((p.eval(-Complex64::i()) + Complex64::i()).norm() < 1e-10);
        assert!(p.eval(Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn lambda1_selection_rule() {
        let roots = vec![
            DistinctRoot::new(Complex64::new(3.0, 2.0), 1),
            DistinctRoot::new(Complex64::new(3.0, -2.0), 1),
            DistinctRoot::new(Complex64::new(-1.0, 2.0), 1),
            DistinctRoot::new(Complex64::new(-1.0, -2.0), 1),
            DistinctRoot::new(Complex64::new(0.0, 1.0), 1),
            DistinctRoot::new(Complex64::new(0.0, -1.0), 1),
        ];
        let s = RootSpectrum::from_roots(roots).unwrap();
        let idx = select_lambda1(&s).unwrap();
        assert_eq!(s.roots()[idx].value, Complex64::new(-1.0, 2.0));
    }

    #[test]
    fn real_spectrum_has_no_interpolant() {
        let s = numeric_roots(&poly(&[-1, 0, 1])).unwrap();
        assert!(matches!(interpolate_witness_poly(&s, Complex64::i()), Err(Error::RealRooted)));
    }

    #[test]
    fn witness_examples() {
        let tol = Tolerances::default();
        let w = negative_witness(&poly(&[1, 1, 1]), 2, &tol).unwrap();
        let r3 = 3f64.sqrt();
        assert!((w.x[0] - 1.0 / r3).abs() < 1e-14 && (w.x[1] - 2.0 / r3).abs() < 1e-14);
        assert_eq!((w.mu, w.claimed_value), (1, -2.0));
        assert!(w.residual < 1e-12);

        let w = negative_witness(&poly(&[1, 1, 1]), 4, &tol).unwrap();
        assert!(w.residual < 1e-8);

        let w = negative_witness(&poly(&[1, 0, 1]).pow(2), 2, &tol).unwrap();
        assert_eq!((w.mu, w.claimed_value), (2, -4.0));
        assert_eq!(w.x.len(), 4);
        assert_eq!(&w.x[2..], &[0.0, 0.0]);
    }

    #[test]
    fn witness_refusals() {
        let tol = Tolerances::default();
        assert!(matches!(negative_witness(&poly(&[-1, 0, 1]), 2, &tol), Err(Error::RealRooted)));
        assert!(matches!(negative_witness(&poly(&[1, 1, 1]), 3, &tol), Err(Error::OddFormDegree(3))));
        assert!(matches!(negative_witness(&poly(&[1, 1, 1]), 0, &tol), Err(Error::ZeroFormDegree)));
        assert!(matches!(psd_certificate(&poly(&[1, 1, 1]), 2, &tol), Err(Error::NotRealRooted)));
    }

    #[test]
    fn certificate_examples() {
        let tol = Tolerances::default();
        let c = psd_certificate(&poly(&[-1, 0, 1]), 2, &tol).unwrap();
        assert_eq!(
            c.rows,
            vec![
                CertificateRow { weight: 1, coeffs: vec![1.0, -1.0] },
                CertificateRow { weight: 1, coeffs: vec![1.0, 1.0] },
            ]
        );
        let c = psd_certificate(&poly(&[1, -2, 1]), 4, &tol).unwrap();
        assert_eq!(c.rows, vec![CertificateRow { weight: 2, coeffs: vec![1.0, 1.0] }]);
        let c = psd_certificate(&poly(&[-5, 1]), 2, &tol).unwrap();
        assert_eq!(c.rows, vec![CertificateRow { weight: 1, coeffs: vec![1.0] }]);

        // Irrational real roots go through the numeric spectrum.
        let c = psd_certificate(&poly(&[-2, 0, 1]), 6, &tol).unwrap();
        assert_eq!(c.rows.len(), 2);
    }

    #[test]
    fn verification_examples() {
        let tol = Tolerances::default();
        let f = poly(&[1, 1, 1]);
        let w = negative_witness(&f, 2, &tol).unwrap();
        let report = verify_certificate(&f, &Certificate::NegativeWitness(w), &tol);
        assert!(report.passed, "{report:?}");
        assert!(report.residual < 1e-10);

        let g = poly(&[-1, 0, 1]);
        let fake = NegativeWitness {
            m: 2,
            x: vec![1.0, 0.0],
            claimed_value: -2.0,
            mu: 1,
            residual: 0.0,
        };
        let report = verify_certificate(&g, &Certificate::NegativeWitness(fake), &tol);
        assert!(!report.passed);
        assert_eq!(report.value, Some(2.0));

        let c = psd_certificate(&g, 2, &tol).unwrap();
        let report = verify_certificate(&g, &Certificate::PsdDecomposition(c), &tol);
        assert!(report.passed);
        assert_eq!(report.residual, 0.0);
    }

    #[test]
    fn tampered_decomposition_fails() {
        let tol = Tolerances::default();
        let g = poly(&[-1, 0, 1]);
        let mut c = psd_certificate(&g, 2, &tol).unwrap();
        c.rows[0].coeffs[1] = -1.5;
        assert!(!verify_certificate(&g, &Certificate::PsdDecomposition(c.clone()), &tol).passed);
        c.rows.pop();
        let r = verify_certificate(&g, &Certificate::PsdDecomposition(c), &tol);
        assert!(!r.passed && r.message.contains("weights"));
    }

    #[test]
    fn certificate_json_shapes() {
        let tol = Tolerances::default();
        let w = negative_witness(&poly(&[1, 1, 1]), 2, &tol).unwrap();
        let text = Certificate::NegativeWitness(w.clone()).to_json();
        assert!(text.contains("\"kind\": \"negative_witness\""));
        assert_eq!(Certificate::from_json(&text).unwrap(), Certificate::NegativeWitness(w));

        let c = psd_certificate(&poly(&[-1, 0, 1]), 2, &tol).unwrap();
        let text = Certificate::PsdDecomposition(c.clone()).to_json();
        assert!(text.contains("\"kind\": \"psd_decomposition\""));
        assert!(text.contains("\"weight\": 1"));
        assert_eq!(Certificate::from_json(&text).unwrap(), Certificate::PsdDecomposition(c));
        assert!(Certificate::from_json(r#"{"kind":"other","m":2}"#).is_err());
    }
}
