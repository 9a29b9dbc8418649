//! Exact univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, integer, to_f64};

/// A polynomial with exact rational coefficients in ascending degree order.
///
/// Trailing zero coefficients are trimmed on construction, so the last stored
/// coefficient is the leading one. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| integer(c)).collect())
    }

    /// The product of `(t - r)` over the given roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| &acc * &Self::from_integers(&[-r, 1]))
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t`.
    pub fn indeterminate() -> Self {
        Self::from_integers(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Degree of a polynomial that analysis operations accept (degree >= 1).
    pub fn analysis_degree(&self) -> Result<usize> {
        match self.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Err(Error::ConstantPolynomial),
            Some(n) => Ok(n),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lead) => Self::new(self.coeffs.iter().map(|c| c / lead).collect()),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * integer(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let lead = divisor.leading().expect("division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let factor = &rem[k + dd] / lead;
            if !factor.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &factor * d;
                }
            }
            quot[k] = factor;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact quotient; debug-asserts the remainder vanishes.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `f / gcd(f, f')`: same distinct roots, each simple. Returned monic.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    /// Yun's square-free decomposition: monic, pairwise coprime, square-free
    /// factors `g_i` with `f = lc(f) * prod g_i^i`. Only nonconstant factors are
    /// returned, paired with their multiplicity `i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Polynomial, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            let next_b = b.exact_div(&a);
            let c = d.exact_div(&a);
            d = &c - &next_b.derivative();
            b = next_b;
            i += 1;
        }
        out
    }

    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return ints;
        }
        let sign = if self.leading().is_some_and(Signed::is_negative) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }

    /// All roots with multiplicity, if every root is rational.
    ///
    /// Candidates come from rounding numeric real roots against the divisors
    /// of the leading coefficient of each square-free factor; every accepted
    /// root is confirmed by exact evaluation. Gives up (returns `None`) on
    /// leading coefficients too large to factor by trial division.
    pub fn rational_roots(&self) -> Option<Vec<(BigRational, usize)>> {
        self.analysis_degree().ok()?;
        let mut roots = Vec::new();
        for (factor, mult) in self.squarefree_decomposition() {
            let ints = factor.primitive_integer_coeffs();
            let lead = ints.last()?.to_u64()?;
            let divisors = small_divisors(lead)?;
            let deg = factor.degree()?;
            let spectrum = crate::roots::aberth_f64(&factor).ok()?;
            let mut found: Vec<BigRational> = Vec::new();
            for z in spectrum {
                if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                    return None;
                }
                let hit = divisors.iter().find_map(|&q| {
                    let num = (z.re * q as f64).round();
                    let cand = BigRational::new(BigInt::from(num as i64), BigInt::from(q));
                    factor.eval(&cand).is_zero().then_some(cand)
                })?;
                if !found.contains(&hit) {
                    found.push(hit);
                }
            }
            if found.len() != deg {
                return None;
            }
            roots.extend(found.into_iter().map(|r| (r, mult)));
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Some(roots)
    }

    /// Ascending coefficient list, e.g. `-1,0,1`.
    pub fn to_coeff_list(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn small_divisors(n: u64) -> Option<Vec<u64>> {
    if n == 0 || n > 1 << 40 {
        return None;
    }
    let mut out: Vec<u64> = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    Some(out)
}

impl fmt::Display for Polynomial {
    /// Descending powers of `t`, e.g. `t^2 + t + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let coeff = format_rational(&mag);
            let coeff = if mag.is_integer() { coeff } else { format!("({coeff})") };
            match k {
                0 => f.write_str(&coeff)?,
                _ => {
                    if !mag.is_one() {
                        f.write_str(&coeff)?;
                    }
                    f.write_str("t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        Polynomial::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Root power sums `p_k = sum of lambda^k` over all roots with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSums {
    values: Vec<BigRational>,
    source_degree: usize,
}

impl PowerSums {
    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, k: usize) -> &BigRational {
        &self.values[k]
    }

    pub fn source_degree(&self) -> usize {
        self.source_degree
    }
}

/// Power sums `p_0 ..= p_{k_max}` by Newton's identities on the monic
/// normalisation of `f`. No roots are computed.
pub fn power_sums(f: &Polynomial, k_max: usize) -> Result<PowerSums> {
    let n = f.analysis_degree()?;
    let monic = f.monic();
    // a[i] is the coefficient of t^(n-i), so monic f = t^n + a1 t^(n-1) + ... + an.
    let a: Vec<&BigRational> = monic.coeffs().iter().rev().collect();
    let mut p: Vec<BigRational> = Vec::with_capacity(k_max + 1);
    p.push(integer(n as i64));
    for k in 1..=k_max {
        let mut acc = BigRational::zero();
        for i in 1..k.min(n + 1) {
            acc += a[i] * &p[k - i];
        }
        if k <= n {
            acc += a[k] * integer(k as i64);
        }
        p.push(-acc);
    }
    Ok(PowerSums {
        values: p,
        source_degree: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(values: &[i64]) -> Vec<BigRational> {
        values.iter().map(|&v| integer(v)).collect()
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::from_integers(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::from_integers(&[0, 0, 0]).is_zero());
        assert_eq!(
            Polynomial::from_integers(&[0]).analysis_degree().unwrap_err().to_string(),
            Error::ZeroPolynomial.to_string()
        );
        assert!(matches!(
            Polynomial::from_integers(&[3]).analysis_degree(),
            Err(Error::ConstantPolynomial)
        ));
    }

    #[test]
    fn power_sums_of_worked_examples() {
        let f = Polynomial::from_integers(&[-1, 0, 1]);
        assert_eq!(power_sums(&f, 4).unwrap().values(), ints(&[2, 0, 2, 0, 2]));
        let g = Polynomial::from_integers(&[1, 1, 1]);
        assert_eq!(power_sums(&g, 4).unwrap().values(), ints(&[2, -1, -1, 2, -1]));
        let h = Polynomial::from_integers(&[-5, 1]);
        assert_eq!(power_sums(&h, 2).unwrap().values(), ints(&[1, 5, 25]));
    }

    #[test]
    fn power_sums_ignore_scaling() {
        let f = Polynomial::from_integers(&[-6, 11, -6, 1]);
        let g = f.scale(&integer(-7));
        assert_eq!(power_sums(&f, 9).unwrap(), power_sums(&g, 9).unwrap());
        // 1 + 2^3 + 3^3
        assert_eq!(power_sums(&f, 3).unwrap().get(3), &integer(36));
    }

    #[test]
    fn power_sums_reject_zero() {
        assert!(matches!(power_sums(&Polynomial::zero(), 3), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn division_and_gcd() {
        let a = Polynomial::from_roots(&[1, 2, 2, 3]);
        let b = Polynomial::from_roots(&[2, 5]);
        let g = a.gcd(&b);
        assert_eq!(g, Polynomial::from_roots(&[2]));
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap() < b.degree().unwrap());
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        let f = Polynomial::from_roots(&[1, 1, 1, -2, -2, 4]).scale(&integer(3));
        let dec = f.squarefree_decomposition();
        assert_eq!(
            dec,
            vec![
                (Polynomial::from_roots(&[4]), 1),
                (Polynomial::from_roots(&[-2]), 2),
                (Polynomial::from_roots(&[1]), 3),
            ]
        );
        assert_eq!(f.squarefree_part(), Polynomial::from_roots(&[1, -2, 4]));
    }

    #[test]
    fn rational_roots_found_exactly() {
        let f = &Polynomial::from_roots(&[3, -1, -1]) * &Polynomial::from_integers(&[1, 2]);
        let roots = f.rational_roots().unwrap();
        let half = BigRational::new((-1).into(), 2.into());
        assert_eq!(roots, vec![(integer(-1), 2), (half, 1), (integer(3), 1)]);
        assert!(Polynomial::from_integers(&[-2, 0, 1]).rational_roots().is_none());
        assert!(Polynomial::from_integers(&[1, 1, 1]).rational_roots().is_none());
    }

    #[test]
    fn display_is_descending() {
        assert_eq!(Polynomial::from_integers(&[1, 1, 1]).to_string(), "t^2 + t + 1");
        assert_eq!(Polynomial::from_integers(&[-1, 0, -3]).to_string(), "-3t^2 - 1");
        assert_eq!(Polynomial::from_integers(&[-1, 0, 1]).to_coeff_list(), "-1,0,1");
    }
}
