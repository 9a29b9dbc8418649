//! The n-ary m-adic forms attached to a polynomial.
//!
//! For a polynomial with roots `λ_1, …, λ_n` the form of degree `m` is
//!
//! ```text
//! Φ_m(x) = Σ_ℓ (x_1 + x_2 λ_ℓ + … + x_n λ_ℓ^(n-1))^m
//! ```
//!
//! Collected by monomial, the coefficient of `x^α` is
//! `multinomial(m; α) · p_K(α)` where `K(α) = Σ_j α_j (j - 1)` and `p_K` is
//! the K-th root power sum. [`build_form_exact`] obtains `p_K` from Newton's
//! identities with no root finding; [`build_form_from_roots`] expands the
//! sum of powers over numerically computed roots. The two routes are
//! independent and are checked against each other in the test suites.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::{power_sums, Polynomial};
use crate::rational::{format_rational, from_f64, parse_rational, to_f64};
use crate::roots::RootSpectrum;

/// Relative tolerance on the imaginary residue left after conjugate
/// cancellation in the root-based routes.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<u32>;

/// Coefficient field of a form.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    /// Value of `coefficient_field` in the JSON schema.
    const FIELD: &'static str;

    fn is_zero_coeff(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Option<Self>;
    fn is_negative_coeff(&self) -> bool;
    /// Text of `|self|`, or `None` when `|self| = 1`.
    fn magnitude_text(&self) -> Option<String>;
}

impl Coefficient for BigRational {
    const FIELD: &'static str = "rational";

    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        to_f64(self)
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(value: &Value) -> Option<Self> {
        parse_rational(value.as_str()?)
    }

    fn is_negative_coeff(&self) -> bool {
        self.is_negative()
    }

    fn magnitude_text(&self) -> Option<String> {
        let mag = self.abs();
        if mag.is_one() {
            None
        } else if mag.is_integer() {
            Some(format_rational(&mag))
        } else {
            Some(format!("({})", format_rational(&mag)))
        }
    }
}

impl Coefficient for f64 {
    const FIELD: &'static str = "double";

    fn is_zero_coeff(&self) -> bool {
        *self == 0.0
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }

    fn from_json(value: &Value) -> Option<Self> {
        value.as_f64()
    }

    fn is_negative_coeff(&self) -> bool {
        *self < 0.0
    }

    fn magnitude_text(&self) -> Option<String> {
        let mag = self.abs();
        (mag != 1.0).then(|| format!("{mag}"))
    }
}

/// A homogeneous polynomial of degree `degree` in `nvars` variables, stored
/// sparsely by exponent vector. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MAdicForm<C> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponents, C>,
}

pub type ExactForm = MAdicForm<BigRational>;
pub type FloatForm = MAdicForm<f64>;

impl<C: Coefficient> MAdicForm<C> {
    pub fn zero(nvars: usize, degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroFormDegree);
        }
        if nvars == 0 {
            return Err(Error::Schema("a form needs at least one variable".into()));
        }
        Ok(Self {
            nvars,
            degree,
            terms: BTreeMap::new(),
        })
    }

    /// Builds a form, rejecting exponent vectors of the wrong length or total
    /// degree and repeated monomials. Zero coefficients are dropped.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponents, C)>,
    ) -> Result<Self> {
        let mut form = Self::zero(nvars, degree)?;
        for (exps, coeff) in terms {
            if exps.len() != nvars {
                return Err(Error::Schema(format!(
                    "exponent vector {exps:?} has length {}, expected {nvars}",
                    exps.len()
                )));
            }
            let total: u64 = exps.iter().map(|&e| u64::from(e)).sum();
            if total != u64::from(degree) {
                return Err(Error::Schema(format!(
                    "non-homogeneous term {exps:?}: degree {total}, expected {degree}"
                )));
            }
            if form.terms.contains_key(&exps) {
                return Err(Error::Schema(format!("repeated monomial {exps:?}")));
            }
            if !coeff.is_zero_coeff() {
                form.terms.insert(exps, coeff);
            }
        }
        Ok(form)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, C> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&C> {
        self.terms.get(exps)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                actual: len,
            });
        }
        Ok(())
    }

    /// Direct floating-point sum over the terms.
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(x)
                    .fold(c.to_f64(), |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum())
    }

    pub fn to_float(&self) -> FloatForm {
        MAdicForm {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_f64()))
                .filter(|(_, c)| *c != 0.0)
                .collect(),
        }
    }

    /// Canonical JSON: terms in ascending lexicographic exponent order.
    pub fn to_json(&self) -> String {
        let wire = FormWire {
            nvars: self.nvars,
            degree: self.degree,
            coefficient_field: C::FIELD.to_string(),
            terms: self
                .terms
                .iter()
                .map(|(exps, c)| TermWire {
                    exponents: exps.clone(),
                    coeff: c.to_json(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("form serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: FormWire = serde_json::from_str(text)?;
        if wire.coefficient_field != C::FIELD {
            return Err(Error::Schema(format!(
                "coefficient_field is {:?}, expected {:?}",
                wire.coefficient_field,
                C::FIELD
            )));
        }
        let terms = wire
            .terms
            .into_iter()
            .map(|t| {
                C::from_json(&t.coeff)
                    .map(|c| (t.exponents, c))
                    .ok_or_else(|| Error::Schema(format!("bad {} coefficient {}", C::FIELD, t.coeff)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(wire.nvars, wire.degree, terms)
    }
}

#[derive(Serialize, Deserialize)]
struct FormWire {
    nvars: usize,
    degree: u32,
    coefficient_field: String,
    terms: Vec<TermWire>,
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    exponents: Exponents,
    coeff: Value,
}

impl<C: Coefficient> fmt::Display for MAdicForm<C> {
    /// Descending powers of `x1`, then `x2`, and so on, with explicit signs:
    /// `2x1^3 - 3x1^2x2 - 3x1x2^2 + 2x2^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            match (i == 0, c.is_negative_coeff()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if let Some(mag) = c.magnitude_text() {
                f.write_str(&mag)?;
            }
            for (j, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "x{}", j + 1)?,
                    _ => write!(f, "x{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl ExactForm {
    /// Exact value at a rational point.
    pub fn evaluate(&self, x: &[BigRational]) -> Result<BigRational> {
        self.check_point(x.len())?;
        // Scale the point and the coefficients to integers so the inner loop
        // is pure integer arithmetic.
        let point_den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled: Vec<BigInt> = x
            .iter()
            .map(|v| v.numer() * (&point_den / v.denom()))
            .collect();
        let m = self.degree as usize;
        let powers: Vec<Vec<BigInt>> = scaled
            .iter()
            .map(|a| {
                let mut row = Vec::with_capacity(m + 1);
                row.push(BigInt::one());
                for e in 1..=m {
                    let next = &row[e - 1] * a;
                    row.push(next);
                }
                row
            })
            .collect();
        let coeff_den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut sum = BigInt::zero();
        for (exps, c) in &self.terms {
            let mut term = c.numer() * (&coeff_den / c.denom());
            for (j, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term *= &powers[j][e as usize];
                }
            }
            sum += term;
        }
        Ok(BigRational::new(sum, coeff_den * num_traits::pow(point_den, m)))
    }

    /// Exact value at a point given in doubles (each double is an exact
    /// rational), avoiding the cancellation of a floating-point sum.
    pub fn evaluate_at_f64(&self, x: &[f64]) -> Result<BigRational> {
        let exact = x
            .iter()
            .map(|&v| from_f64(v).ok_or_else(|| Error::Schema(format!("non-finite coordinate {v}"))))
            .collect::<Result<Vec<_>>>()?;
        self.evaluate(&exact)
    }

    pub fn scale(&self, factor: &BigRational) -> ExactForm {
        MAdicForm {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Largest coefficient magnitude (zero for the zero form).
    pub fn max_abs_coeff(&self) -> BigRational {
        self.terms
            .values()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// All exponent vectors of length `nvars` summing to `degree`, in ascending
/// lexicographic order.
pub fn exponent_vectors(nvars: usize, degree: u32) -> Vec<Exponents> {
    fn fill(prefix: &mut Exponents, slots: usize, remaining: u32, out: &mut Vec<Exponents>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=remaining {
            prefix.push(e);
            fill(prefix, slots - 1, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        fill(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
    }
    out
}

/// `m! / (α_1! ⋯ α_n!)` with `m = Σ α_j`.
pub fn multinomial(exps: &[u32]) -> BigInt {
    // Product of binomials C(running + e, e); every partial quotient is an
    // integer, so the division is exact at each step.
    let mut small: Option<u128> = Some(1);
    let mut running = 0u32;
    for &e in exps {
        for i in 1..=e {
            running += 1;
            small = small.and_then(|r| r.checked_mul(u128::from(running))).map(|r| r / u128::from(i));
        }
    }
    if let Some(r) = small {
        return BigInt::from(r);
    }
    let mut result = BigInt::one();
    let mut running = 0u32;
    for &e in exps {
        for i in 1..=e {
            running += 1;
            result = result * BigInt::from(running) / BigInt::from(i);
        }
    }
    result
}

/// The power-sum index `K(α) = Σ_j α_j (j - 1)` of a monomial.
pub fn power_index(exps: &[u32]) -> usize {
    exps.iter()
        .enumerate()
        .map(|(j, &e)| j * e as usize)
        .sum()
}

/// `Φ_m` of `f` in exact arithmetic from Newton power sums.
pub fn build_form_exact(f: &Polynomial, m: u32) -> Result<ExactForm> {
    let n = f.analysis_degree()?;
    if m == 0 {
        return Err(Error::ZeroFormDegree);
    }
    let sums = power_sums(f, m as usize * (n - 1))?;
    let terms = exponent_vectors(n, m).into_iter().filter_map(|exps| {
        let p = sums.get(power_index(&exps));
        if p.is_zero() {
            return None;
        }
        let numer = p.numer() * multinomial(&exps);
        let coeff = if p.denom().is_one() {
            BigRational::from_integer(numer)
        } else {
            BigRational::new(numer, p.denom().clone())
        };
        Some((exps, coeff))
    });
    MAdicForm::from_terms(n, m, terms)
}

/// Complex power sums `Σ μ λ^K` and their magnitudes `Σ μ |λ|^K`, for
/// `K = 0 ..= k_max`.
fn spectrum_power_sums(spectrum: &RootSpectrum, k_max: usize) -> (Vec<Complex64>, Vec<f64>) {
    let mut sums = vec![Complex64::new(0.0, 0.0); k_max + 1];
    let mut mags = vec![0.0; k_max + 1];
    for root in spectrum.roots() {
        let mu = root.multiplicity as f64;
        let modulus = root.value.norm();
        let mut power = Complex64::new(1.0, 0.0);
        let mut power_mod = 1.0;
        for k in 0..=k_max {
            sums[k] += power * mu;
            mags[k] += power_mod * mu;
            power *= root.value;
            power_mod *= modulus;
        }
    }
    (sums, mags)
}

/// `Φ_m` expanded from the sum of m-th powers of the root linear forms.
///
/// Imaginary parts cancel between conjugate roots; a residue above
/// `IMAGINARY_TOLERANCE * (1 + magnitude)` is an error.
pub fn build_form_from_roots(spectrum: &RootSpectrum, m: u32) -> Result<FloatForm> {
    if m == 0 {
        return Err(Error::ZeroFormDegree);
    }
    let n = spectrum.degree();
    let (sums, mags) = spectrum_power_sums(spectrum, m as usize * n.saturating_sub(1));
    let mut terms = Vec::new();
    for exps in exponent_vectors(n, m) {
        let k = power_index(&exps);
        let weight = to_f64(&BigRational::from_integer(multinomial(&exps)));
        let value = sums[k] * weight;
        let tolerance = IMAGINARY_TOLERANCE * (1.0 + weight * mags[k]);
        if value.im.abs() > tolerance {
            return Err(Error::ImaginaryResidue {
                residue: value.im.abs(),
                tolerance,
            });
        }
        terms.push((exps, value.re));
    }
    MAdicForm::from_terms(n, m, terms)
}

/// Largest coefficient deviation between the exact form and a float form
/// built from `spectrum`, each scaled by `1 + multinomial · Σ μ |λ|^K`, the
/// magnitude of the summands that produced the coefficient.
pub fn max_route_deviation(exact: &ExactForm, float: &FloatForm, spectrum: &RootSpectrum) -> Result<f64> {
    if exact.nvars() != float.nvars() || exact.degree() != float.degree() {
        return Err(Error::DimensionMismatch {
            expected: exact.nvars(),
            actual: float.nvars(),
        });
    }
    let m = exact.degree();
    let (_, mags) = spectrum_power_sums(spectrum, m as usize * exact.nvars().saturating_sub(1));
    let mut worst: f64 = 0.0;
    for exps in exponent_vectors(exact.nvars(), m) {
        let a = exact.coeff(&exps).map_or(0.0, to_f64);
        let b = float.coeff(&exps).copied().unwrap_or(0.0);
        let weight = to_f64(&BigRational::from_integer(multinomial(&exps)));
        let scale = 1.0 + weight * mags[power_index(&exps)];
        worst = worst.max((a - b).abs() / scale);
    }
    Ok(worst)
}

/// `Φ_m` expanded exactly from rational roots with multiplicities.
pub fn build_form_from_rational_roots(roots: &[(BigRational, usize)], m: u32) -> Result<ExactForm> {
    if m == 0 {
        return Err(Error::ZeroFormDegree);
    }
    let n: usize = roots.iter().map(|(_, mu)| mu).sum();
    let k_max = m as usize * n.saturating_sub(1);
    let mut sums = vec![BigRational::zero(); k_max + 1];
    for (root, mu) in roots {
        let mu = BigRational::from_integer(BigInt::from(*mu));
        let mut power = BigRational::one();
        for s in sums.iter_mut() {
            *s += &mu * &power;
            power *= root;
        }
    }
    let terms = exponent_vectors(n, m).into_iter().map(|exps| {
        let coeff = &sums[power_index(&exps)] * BigRational::from_integer(multinomial(&exps));
        (exps, coeff)
    });
    MAdicForm::from_terms(n, m, terms)
}

/// One linear form `p(λ) = Σ_j x_j λ^(j-1)`, weighted by the multiplicity of `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub weight: usize,
    pub coeffs: Vec<Complex64>,
}

/// The weighted linear forms whose m-th powers sum to `Φ_m`, one per
/// distinct root.
pub fn linear_forms(spectrum: &RootSpectrum) -> Vec<LinearForm> {
    let n = spectrum.degree();
    spectrum
        .roots()
        .iter()
        .map(|root| {
            let mut coeffs = Vec::with_capacity(n);
            let mut power = Complex64::new(1.0, 0.0);
            for _ in 0..n {
                coeffs.push(power);
                power *= root.value;
            }
            LinearForm {
                weight: root.multiplicity,
                coeffs,
            }
        })
        .collect()
}

/// `Σ μ p(λ)^m` at a real point, with the residue of its imaginary part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerEvaluation {
    pub value: f64,
    pub imaginary_residue: f64,
    /// `Σ μ |p(λ)|^m`, the scale against which errors are measured.
    pub magnitude: f64,
}

/// Evaluates `Φ_m(x)` as the multiplicity-weighted sum of m-th powers of
/// `p(λ)`, where `p(t) = Σ_j x_j t^(j-1)`.
pub fn evaluate_via_powers(spectrum: &RootSpectrum, x: &[f64], m: u32) -> Result<PowerEvaluation> {
    let n = spectrum.degree();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    if m == 0 {
        return Err(Error::ZeroFormDegree);
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for root in spectrum.roots() {
        let p = x
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * root.value + c);
        let power = p.powu(m);
        total += power * root.multiplicity as f64;
        magnitude += power.norm() * root.multiplicity as f64;
    }
    let tolerance = IMAGINARY_TOLERANCE * (1.0 + magnitude);
    if total.im.abs() > tolerance {
        return Err(Error::ImaginaryResidue {
            residue: total.im.abs(),
            tolerance,
        });
    }
    Ok(PowerEvaluation {
        value: total.re,
        imaginary_residue: total.im.abs(),
        magnitude,
    })
}
