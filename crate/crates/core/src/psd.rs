//! Positive semidefiniteness: the exact test for the quadratic (m = 2)
//! Hermite form, and a numeric sphere search for forms of higher degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::forms::ExactForm;
use crate::poly::{power_sums, Polynomial};
use crate::rational::{format_rational, integer, parse_rational, to_f64};

/// A symmetric rational matrix. For a polynomial of degree n the Hermite
/// matrix is the n x n Hankel matrix `H[i][j] = p_{i+j}` (0-based) of root
/// power sums, whose quadratic form is `Φ_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteMatrix {
    rows: Vec<Vec<BigRational>>,
}

impl HermiteMatrix {
    /// Validates a square, exactly symmetric matrix.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, value) in row.iter().enumerate().skip(i + 1) {
                if *value != rows[j][i] {
                    return Err(Error::Asymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| integer(v)).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    /// `xᵀ H x`.
    pub fn quadratic_form(&self, x: &[BigRational]) -> Result<BigRational> {
        if x.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                actual: x.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                acc += h * &x[i] * &x[j];
            }
        }
        Ok(acc)
    }

    /// Monic characteristic polynomial `det(tI - H)`.
    ///
    /// `H` is scaled by the lcm `D` of its denominators, the integer matrix
    /// `B = D·H` goes through the Faddeev–LeVerrier recurrence (whose
    /// divisions are exact over the integers), and the coefficients are
    /// scaled back: the coefficient of `t^i` is `b_i / D^(n-i)`.
    pub fn characteristic_polynomial(&self) -> Polynomial {
        let n = self.size();
        let denom = self
            .rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let b: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.numer() * (&denom / v.denom())).collect())
            .collect();
        let chi = integer_characteristic_polynomial(&b);
        let mut scale = BigInt::one();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for i in (0..=n).rev() {
            coeffs[i] = BigRational::new(chi[i].clone(), scale.clone());
            scale *= &denom;
        }
        Polynomial::new(coeffs)
    }

    /// Exact PSD decision: writing `det(tI - H) = tⁿ - c₁tⁿ⁻¹ + c₂tⁿ⁻² - …`,
    /// `H` is positive semidefinite iff every `c_k ≥ 0`.
    pub fn is_psd(&self) -> bool {
        let n = self.size();
        let chi = self.characteristic_polynomial();
        chi.coeffs().iter().enumerate().all(|(i, c)| {
            let c = if (n - i) % 2 == 1 { -c } else { c.clone() };
            !c.is_negative()
        })
    }

    /// JSON array of rows of rational strings.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|v| Value::String(format_rational(v))).collect()))
            .collect();
        serde_json::to_string(&Value::Array(rows)).expect("matrix serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<Vec<String>> = serde_json::from_str(text)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| parse_rational(&s).ok_or_else(|| Error::Schema(format!("bad rational {s:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

/// Ascending coefficients of `det(tI - B)` for an integer matrix.
fn integer_characteristic_polynomial(b: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = b.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = B M_{k-1} + c_{n-k+1} I
        let mut next = matmul(b, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        // c_{n-k} = -tr(B M_k) / k
        let trace: BigInt = (0..n)
            .map(|i| (0..n).map(|j| &b[i][j] * &m[j][i]).sum::<BigInt>())
            .sum();
        coeffs[n - k] = -trace / BigInt::from(k);
    }
    coeffs
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Hankel matrix of power sums: `H[i][j] = p_{i+j}` (0-based).
pub fn hermite_matrix(f: &Polynomial) -> Result<HermiteMatrix> {
    let n = f.analysis_degree()?;
    let sums = power_sums(f, 2 * (n - 1))?;
    let rows = (0..n)
        .map(|i| (0..n).map(|j| sums.get(i + j).clone()).collect())
        .collect();
    Ok(HermiteMatrix { rows })
}

pub fn is_psd_exact(matrix: &HermiteMatrix) -> bool {
    matrix.is_psd()
}

/// Exact decision whether every root of `f` is real, via the Hermite form.
pub fn classify_real_rooted(f: &Polynomial) -> Result<bool> {
    Ok(hermite_matrix(f)?.is_psd())
}

/// Settings for the projected-gradient search on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereSearch {
    pub restarts: usize,
    pub steps: usize,
    pub step_size: f64,
    pub seed: u64,
}

impl Default for SphereSearch {
    fn default() -> Self {
        Self {
            restarts: 32,
            steps: 500,
            step_size: 0.1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereMinimum {
    /// `Φ(x) / |x|^m` evaluated exactly at `argmin`, then rounded.
    pub min_value: f64,
    pub argmin: Vec<f64>,
}

/// Flattened float copy of a form, normalised by its largest coefficient.
struct CompiledForm {
    nvars: usize,
    degree: u32,
    terms: Vec<(f64, Vec<u32>)>,
}

impl CompiledForm {
    fn new(form: &ExactForm) -> Self {
        let max = form.max_abs_coeff();
        let terms = form
            .terms()
            .iter()
            .map(|(e, c)| (to_f64(&(c / &max)), e.clone()))
            .collect();
        Self {
            nvars: form.nvars(),
            degree: form.degree(),
            terms,
        }
    }

    fn powers(&self, x: &[f64]) -> Vec<Vec<f64>> {
        x.iter()
            .map(|&xi| {
                let mut row = vec![1.0; self.degree as usize + 1];
                for e in 1..row.len() {
                    row[e] = row[e - 1] * xi;
                }
                row
            })
            .collect()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let pw = self.powers(x);
        self.terms
            .iter()
            .map(|(c, e)| e.iter().enumerate().fold(*c, |acc, (j, &k)| acc * pw[j][k as usize]))
            .sum()
    }

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = self.nvars;
        let pw = self.powers(x);
        let mut grad = vec![0.0; n];
        let mut value = 0.0;
        let mut prefix = vec![1.0; n + 1];
        let mut suffix = vec![1.0; n + 1];
        for (c, e) in &self.terms {
            for j in 0..n {
                prefix[j + 1] = prefix[j] * pw[j][e[j] as usize];
            }
            for j in (0..n).rev() {
                suffix[j] = suffix[j + 1] * pw[j][e[j] as usize];
            }
            value += c * prefix[n];
            for j in 0..n {
                if e[j] > 0 {
                    let k = e[j] as usize;
                    grad[j] += c * k as f64 * pw[j][k - 1] * prefix[j] * suffix[j + 1];
                }
            }
        }
        (value, grad)
    }
}

fn normalize(x: &mut [f64]) -> bool {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-300 || !norm.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= norm);
    true
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Best-effort minimum of an even-degree form on the unit sphere.
///
/// Descent runs in floating point on a normalised copy of the form; each
/// restart's end point is then evaluated exactly, so a negative result is a
/// genuine point where the form is negative. A nonnegative result is only
/// evidence of semidefiniteness. Restart `r` draws its start from the ChaCha
/// stream `r` of `search.seed`.
pub fn estimate_min_on_sphere(form: &ExactForm, search: &SphereSearch) -> Result<SphereMinimum> {
    let m = form.degree();
    if m % 2 == 1 {
        return Err(Error::OddFormDegree(m));
    }
    let n = form.nvars();
    if form.is_zero() {
        let mut argmin = vec![0.0; n];
        argmin[0] = 1.0;
        return Ok(SphereMinimum {
            min_value: 0.0,
            argmin,
        });
    }
    let compiled = CompiledForm::new(form);
    let mut best: Option<SphereMinimum> = None;
    for restart in 0..search.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        rng.set_stream(restart as u64);
        let mut x: Vec<f64> = loop {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            if normalize(&mut v) {
                break v;
            }
        };
        descend(&compiled, &mut x, search);
        let exact = form.evaluate_at_f64(&x)?;
        let norm_sq = dot(&x, &x);
        let value = to_f64(&exact) / norm_sq.powi(m as i32 / 2);
        if best.as_ref().is_none_or(|b| value < b.min_value) {
            best = Some(SphereMinimum {
                min_value: value,
                argmin: x,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}

fn descend(form: &CompiledForm, x: &mut Vec<f64>, search: &SphereSearch) {
    let mut eta = search.step_size;
    let (mut value, mut grad) = form.value_and_gradient(x);
    for _ in 0..search.steps {
        let radial = dot(&grad, x);
        let tangent: Vec<f64> = grad.iter().zip(x.iter()).map(|(g, xi)| g - radial * xi).collect();
        let slope = dot(&tangent, &tangent);
        if slope.is_nan() || slope <= 1e-30 {
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let mut y: Vec<f64> = x.iter().zip(&tangent).map(|(xi, t)| xi - eta * t).collect();
            if normalize(&mut y) {
                let vy = form.value(&y);
                if vy < value - 1e-4 * eta * slope {
                    *x = y;
                    accepted = true;
                    eta = (eta * 1.5).min(1e3);
                    break;
                }
            }
            eta *= 0.5;
        }
        if !accepted {
            break;
        }
        (value, grad) = form.value_and_gradient(x);
    }
}
