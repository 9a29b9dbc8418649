//! Numeric complex roots with multiplicities.
//!
//! Multiplicities come from an exact square-free decomposition, so the
//! numeric work only ever sees simple roots. Each square-free factor is
//! solved with the Aberth–Ehrlich iteration in double precision (retried
//! once in double-double if it stalls), every root is polished by Newton
//! steps in double-double against the exact coefficients, and the pooled
//! roots are then clustered and made exactly conjugate-symmetric.

use num_complex::{Complex, Complex64};
use num_traits::Float;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{to_f64, to_twofloat};

/// Iteration cap for the simultaneous iteration.
pub const MAX_ITERATIONS: usize = 200;

/// Relative clustering radius: roots closer than `CLUSTER_RADIUS * (1 + max |root|)`
/// are considered one root.
pub const CLUSTER_RADIUS: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistinctRoot {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl DistinctRoot {
    pub fn new(value: Complex64, multiplicity: usize) -> Self {
        Self {
            value,
            multiplicity,
        }
    }

    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }
}

/// Distinct roots of a polynomial, closed under exact complex conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSpectrum {
    roots: Vec<DistinctRoot>,
    residual_bound: f64,
}

impl RootSpectrum {
    /// Builds a spectrum from already-distinct roots, checking conjugate
    /// closure (bit-exact) and positive multiplicities.
    pub fn from_roots(mut roots: Vec<DistinctRoot>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::IllConditioned("empty spectrum".into()));
        }
        if roots.iter().any(|r| r.multiplicity == 0) {
            return Err(Error::IllConditioned("zero multiplicity".into()));
        }
        for r in &roots {
            if !r.is_real() && !roots.iter().any(|s| s.value == r.value.conj() && s.multiplicity == r.multiplicity) {
                return Err(Error::IllConditioned(format!(
                    "root {} has no conjugate partner of equal multiplicity",
                    r.value
                )));
            }
        }
        sort_roots(&mut roots);
        Ok(Self {
            roots,
            residual_bound: 0.0,
        })
    }

    #[cfg(test)]
    pub(crate) fn unchecked(roots: Vec<DistinctRoot>) -> Self {
        Self {
            roots,
            residual_bound: 0.0,
        }
    }

    pub fn roots(&self) -> &[DistinctRoot] {
        &self.roots
    }

    /// Number of roots counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.value.norm()).fold(0.0, f64::max)
    }

    pub fn cluster_radius(&self) -> f64 {
        CLUSTER_RADIUS * (1.0 + self.max_modulus())
    }

    pub fn is_real_rooted(&self) -> bool {
        self.roots.iter().all(DistinctRoot::is_real)
    }

    pub fn real_count(&self) -> usize {
        self.roots.iter().filter(|r| r.is_real()).count()
    }
}

fn sort_roots(roots: &mut [DistinctRoot]) {
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(b.value.im.total_cmp(&a.value.im))
    });
}

/// All complex roots of `f`, grouped into distinct roots with multiplicity.
pub fn numeric_roots(f: &Polynomial) -> Result<RootSpectrum> {
    f.analysis_degree()?;
    let mut pooled: Vec<DistinctRoot> = Vec::new();
    for (factor, mult) in f.squarefree_decomposition() {
        let found = solve_squarefree(&factor)?;
        pooled.extend(found.into_iter().map(|z| DistinctRoot::new(z, mult)));
    }

    let max_modulus = pooled.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
    let radius = CLUSTER_RADIUS * (1.0 + max_modulus);
    let mut roots = cluster(pooled, radius);
    symmetrize(&mut roots, radius)?;
    sort_roots(&mut roots);

    let residual_bound = roots
        .iter()
        .map(|r| f.eval_complex(r.value).norm())
        .fold(0.0, f64::max);
    Ok(RootSpectrum {
        roots,
        residual_bound,
    })
}

fn cluster(pooled: Vec<DistinctRoot>, radius: f64) -> Vec<DistinctRoot> {
    let mut clusters: Vec<DistinctRoot> = Vec::with_capacity(pooled.len());
    for root in pooled {
        match clusters
            .iter_mut()
            .find(|c| (c.value - root.value).norm() <= radius)
        {
            Some(c) => {
                let total = (c.multiplicity + root.multiplicity) as f64;
                c.value = (c.value * c.multiplicity as f64 + root.value * root.multiplicity as f64) / total;
                c.multiplicity += root.multiplicity;
            }
            None => clusters.push(root),
        }
    }
    clusters
}

/// Snaps near-real roots onto the axis and replaces every conjugate pair by
/// an exactly conjugate pair.
fn symmetrize(roots: &mut [DistinctRoot], radius: f64) -> Result<()> {
    for r in roots.iter_mut() {
        if r.value.im.abs() <= radius {
            r.value.im = 0.0;
        }
    }
    let mut paired = vec![false; roots.len()];
    for i in 0..roots.len() {
        if paired[i] || roots[i].value.im <= 0.0 {
            continue;
        }
        let target = roots[i].value.conj();
        let partner = (0..roots.len())
            .filter(|&j| !paired[j] && roots[j].value.im < 0.0)
            .min_by(|&a, &b| {
                (roots[a].value - target)
                    .norm()
                    .total_cmp(&(roots[b].value - target).norm())
            });
        let Some(j) = partner else {
            return Err(Error::IllConditioned(format!(
                "root {} has no conjugate partner",
                roots[i].value
            )));
        };
        if roots[i].multiplicity != roots[j].multiplicity {
            return Err(Error::IllConditioned(format!(
                "conjugate roots {} and {} have different multiplicities",
                roots[i].value, roots[j].value
            )));
        }
        let mean = (roots[i].value + roots[j].value.conj()) * 0.5;
        roots[i].value = mean;
        roots[j].value = mean.conj();
        paired[i] = true;
        paired[j] = true;
    }
    if let Some(k) = (0..roots.len()).find(|&k| roots[k].value.im != 0.0 && !paired[k]) {
        return Err(Error::IllConditioned(format!(
            "root {} has no conjugate partner",
            roots[k].value
        )));
    }
    Ok(())
}

/// Roots of a square-free polynomial, polished in double-double.
fn solve_squarefree(g: &Polynomial) -> Result<Vec<Complex64>> {
    let monic = g.monic();
    let degree = monic.degree().unwrap_or(0);
    let exact: Vec<TwoFloat> = monic.coeffs().iter().map(to_twofloat).collect();
    let roots = match aberth_f64(&monic) {
        Ok(roots) => roots
            .into_iter()
            .map(|z| Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im)))
            .collect(),
        Err(_) => aberth(&exact, MAX_ITERATIONS).ok_or(Error::NoConvergence {
            degree,
            iterations: MAX_ITERATIONS,
        })?,
    };
    Ok(roots
        .into_iter()
        .map(|z| {
            let z = newton_polish(&exact, z, 3);
            Complex64::new(z.re.hi(), z.im.hi())
        })
        .collect())
}

/// Double-precision Aberth–Ehrlich roots of `g` (any nonzero scaling).
pub(crate) fn aberth_f64(g: &Polynomial) -> Result<Vec<Complex64>> {
    let monic = g.monic();
    let degree = monic.degree().unwrap_or(0);
    let coeffs: Vec<f64> = monic.coeffs().iter().map(to_f64).collect();
    aberth(&coeffs, MAX_ITERATIONS).ok_or(Error::NoConvergence {
        degree,
        iterations: MAX_ITERATIONS,
    })
}

/// `f(z)`, `f'(z)` and the running-error scale `sum |a_i| |z|^i`.
fn horner<T: Float>(coeffs: &[T], z: Complex<T>) -> (Complex<T>, Complex<T>, T) {
    let zero = Complex::new(T::zero(), T::zero());
    let mut value = zero;
    let mut deriv = zero;
    let mut scale = T::zero();
    let modulus = z.norm();
    for &c in coeffs.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + Complex::new(c, T::zero());
        scale = scale * modulus + c.abs();
    }
    (value, deriv, scale)
}

/// Aberth–Ehrlich simultaneous iteration on monic ascending coefficients.
/// Returns `None` if some root has not converged within `max_iterations`.
fn aberth<T: Float>(coeffs: &[T], max_iterations: usize) -> Option<Vec<Complex<T>>> {
    let n = coeffs.len().checked_sub(1)?;
    if n == 0 {
        return Some(Vec::new());
    }
    let t = |x: f64| T::from(x).expect("representable constant");
    if n == 1 {
        return Some(vec![Complex::new(-coeffs[0] / coeffs[1], T::zero())]);
    }

    // Initial guesses on a circle sized by the largest |a_{n-k}|^(1/k).
    let radius = (1..=n)
        .map(|k| coeffs[n - k].abs().powf(t(1.0 / k as f64)))
        .fold(T::zero(), T::max);
    let radius = if radius > T::zero() { radius } else { T::one() };
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let theta = t(std::f64::consts::TAU * k as f64 / n as f64 + 0.4);
            Complex::from_polar(radius, theta)
        })
        .collect();

    let eps = T::epsilon();
    let tolerance = t(16.0 * n as f64) * eps;
    let mut done = vec![false; n];
    for _ in 0..max_iterations {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (value, deriv, scale) = horner(coeffs, z[k]);
            if value.norm() <= tolerance * scale {
                done[k] = true;
                continue;
            }
            let ratio = value / deriv;
            let mut repulsion = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                if j != k {
                    repulsion = repulsion + (z[k] - z[j]).inv();
                }
            }
            let one = Complex::new(T::one(), T::zero());
            let step = ratio / (one - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                return None;
            }
            z[k] = z[k] - step;
            if step.norm() <= eps * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Some(z);
        }
    }
    None
}

fn newton_polish<T: Float>(coeffs: &[T], mut z: Complex<T>, steps: usize) -> Complex<T> {
    let (mut value, mut deriv, _) = horner(coeffs, z);
    for _ in 0..steps {
        if value.norm() == T::zero() || deriv.norm() == T::zero() {
            break;
        }
        let candidate = z - value / deriv;
        let (cv, cd, _) = horner(coeffs, candidate);
        if cv.norm().is_nan() || cv.norm() >= value.norm() {
            break;
        }
        z = candidate;
        value = cv;
        deriv = cd;
    }
    z
}
