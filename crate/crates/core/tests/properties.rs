use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use realroot::rational::{from_f64, integer, to_f64};
use realroot::roots::CLUSTER_RADIUS;
use realroot::witness::interpolate_witness_poly;
use realroot::{
    build_form_exact, classify_real_rooted, estimate_min_on_sphere, generate_corpus, is_psd_exact,
    negative_witness, numeric_roots, power_sums, psd_certificate, sturm_real_root_count, CorpusSpec, Error,
    HermiteMatrix, Polynomial, SphereSearch, Tolerances,
};

fn corpus(count: usize, degrees: std::ops::RangeInclusive<usize>, seed: u64) -> Vec<Polynomial> {
    generate_corpus(&CorpusSpec {
        count,
        degrees,
        coeffs: -9..=9,
        seed,
        ..CorpusSpec::default()
    })
    .unwrap()
    .into_iter()
    .map(|e| e.poly)
    .collect()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=6).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

fn integer_poly(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    (prop::collection::vec(-9i64..=9, 1..=max_degree), prop_oneof![1i64..=9, -9i64..=-1]).prop_map(|(mut c, lead)| {
        c.push(lead);
        Polynomial::from_integers(&c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn newton_identities_match_direct_sums(roots in prop::collection::vec(-9i64..=9, 1..=8), lead in 1i64..=5) {
        let f = Polynomial::from_roots(&roots).scale(&integer(lead));
        let k_max = 3 * roots.len();
        let sums = power_sums(&f, k_max).unwrap();
        for k in 0..=k_max {
            let direct: BigInt = roots.iter().map(|&r| num_traits::pow(BigInt::from(r), k)).sum();
            prop_assert_eq!(sums.get(k), &BigRational::from_integer(direct));
        }
    }

    #[test]
    fn forms_are_homogeneous(f in integer_poly(4), m in 1u32..=5, s in rational(),
                             x in prop::collection::vec(rational(), 5)) {
        let form = build_form_exact(&f, m).unwrap();
        let n = form.nvars();
        let x = &x[..n];
        let sx: Vec<BigRational> = x.iter().map(|v| v * &s).collect();
        let lhs = form.evaluate(&sx).unwrap();
        let rhs = num_traits::pow(s.clone(), m as usize) * form.evaluate(x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn terms_have_n_variables_and_degree_m(f in integer_poly(6), m in 1u32..=6) {
        let form = build_form_exact(&f, m).unwrap();
        let n = f.degree().unwrap();
        prop_assert_eq!(form.nvars(), n);
        for exps in form.terms().keys() {
            prop_assert_eq!(exps.len(), n);
            prop_assert_eq!(exps.iter().sum::<u32>(), m);
        }
    }

    #[test]
    fn sphere_minimum_sign_is_scale_invariant(f in integer_poly(4), m in prop::sample::select(vec![2u32, 4]),
                                               num in 1i64..=1000, den in 1i64..=1000) {
        let form = build_form_exact(&f, m).unwrap();
        let c = BigRational::new(num.into(), den.into());
        let search = SphereSearch { restarts: 4, steps: 60, ..SphereSearch::default() };
        let a = estimate_min_on_sphere(&form, &search).unwrap();
        let b = estimate_min_on_sphere(&form.scale(&c), &search).unwrap();
        prop_assert_eq!(a.min_value < 0.0, b.min_value < 0.0);
        prop_assert_eq!(a.min_value > 0.0, b.min_value > 0.0);
    }
}

// ---------------------------------------------------------------------------
// PSD test against principal minors

fn det(m: &[Vec<BigRational>]) -> BigRational {
    // Leibniz expansion, fine for n <= 4.
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigRational::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = BigRational::one();
        for (i, &j) in p.iter().enumerate() {
            term *= &m[i][j];
        }
        if inversions % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Sums of the k x k principal minors, k = 0..=n.
fn principal_minor_sums(m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = m.len();
    let mut sums = vec![BigRational::zero(); n + 1];
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<BigRational>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        let d = if idx.is_empty() { BigRational::one() } else { det(&sub) };
        sums[idx.len()] += d;
    }
    sums
}

fn all_principal_minors_nonnegative(m: &[Vec<BigRational>]) -> bool {
    let n = m.len();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<BigRational>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        !det(&sub).is_negative()
    })
}

fn check_matrix(rows: Vec<Vec<BigRational>>) -> (bool, bool) {
    let n = rows.len();
    let h = HermiteMatrix::from_rows(rows.clone()).unwrap();
    let chi = h.characteristic_polynomial();
    let minors = principal_minor_sums(&rows);
    // det(tI - H) = Σ_k (-1)^k E_k t^(n-k)
    for (k, e) in minors.iter().enumerate() {
        let expected = if k % 2 == 1 { -e } else { e.clone() };
        let got = chi.coeffs().get(n - k).cloned().unwrap_or_else(BigRational::zero);
        assert_eq!(got, expected, "coefficient of t^{} for {rows:?}", n - k);
    }
    (is_psd_exact(&h), all_principal_minors_nonnegative(&rows))
}

fn symmetric(n: usize, upper: &[i64]) -> Vec<Vec<BigRational>> {
    // `upper` lists the entries on and above the diagonal, row by row.
    let position = |i: usize, j: usize| {
        let (i, j) = (i.min(j), i.max(j));
        i * n - i * (i + 1) / 2 + j
    };
    (0..n)
        .map(|i| (0..n).map(|j| integer(upper[position(i, j)])).collect())
        .collect()
}

#[test]
fn psd_test_matches_minors_on_every_3x3_grid_matrix() {
    let mut psd = 0;
    for code in 0..5usize.pow(6) {
        let upper: Vec<i64> = (0..6).map(|k| (code / 5usize.pow(k)) as i64 % 5 - 2).collect();
        let (exact, oracle) = check_matrix(symmetric(3, &upper));
        assert_eq!(exact, oracle, "{upper:?}");
        psd += usize::from(oracle);
    }
    assert!(psd > 100);
}

#[test]
fn psd_test_matches_minors_on_random_4x4_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut psd = 0;
    for sample in 0..10_000 {
        let rows = if sample % 2 == 0 {
            let upper: Vec<i64> = (0..10).map(|_| rng.random_range(-2..=2)).collect();
            symmetric(4, &upper)
        } else {
            // Gram matrices of low rank land on the semidefinite boundary.
            let rank = rng.random_range(1..=4);
            let a: Vec<Vec<i64>> = (0..rank).map(|_| (0..4).map(|_| rng.random_range(-1..=1)).collect()).collect();
            (0..4)
                .map(|i| (0..4).map(|j| integer((0..rank).map(|k| a[k][i] * a[k][j]).sum())).collect())
                .collect()
        };
        let (exact, oracle) = check_matrix(rows);
        assert_eq!(exact, oracle);
        psd += usize::from(oracle);
    }
    assert!(psd > 1000);
}

// ---------------------------------------------------------------------------
// Roots

type ExactComplex = Complex<BigRational>;

/// `|f(λ)|` with `λ` taken as the exact rational value of its doubles.
fn exact_residual(f: &Polynomial, z: Complex64) -> f64 {
    let z = ExactComplex::new(from_f64(z.re).unwrap(), from_f64(z.im).unwrap());
    let mut acc = ExactComplex::new(BigRational::zero(), BigRational::zero());
    for c in f.coeffs().iter().rev() {
        acc = acc * z.clone() + ExactComplex::new(c.clone(), BigRational::zero());
    }
    to_f64(&acc.re).hypot(to_f64(&acc.im))
}

fn ulp_step(v: f64, k: i64) -> f64 {
    let mut v = v;
    for _ in 0..k.unsigned_abs() {
        v = if k > 0 { v.next_up() } else { v.next_down() };
    }
    v
}

/// Smallest exact residual over the doubles within `radius` ulps of `z` in
/// each coordinate (real roots stay on the real axis).
fn best_nearby_residual(f: &Polynomial, z: Complex64, radius: i64) -> f64 {
    let im_steps: Vec<i64> = if z.im == 0.0 { vec![0] } else { (-radius..=radius).collect() };
    let mut best = f64::INFINITY;
    for dr in -radius..=radius {
        for &di in &im_steps {
            let w = Complex64::new(ulp_step(z.re, dr), ulp_step(z.im, di));
            best = best.min(exact_residual(f, w));
        }
    }
    best
}

/// Residuals must meet `1e-8 · (1 + max|c_i|)`. Where a root is so
/// sensitive that no double near it meets the bound (`|f'(λ)| · ulp(λ)` is
/// already larger), the root must instead be the best double around it.
#[test]
fn root_residuals_up_to_degree_16() {
    let mut at_limit = 0;
    for f in corpus(200, 1..=16, 16) {
        let scale = 1.0 + f.coeffs().iter().map(|c| to_f64(c).abs()).fold(0.0, f64::max);
        let spectrum = numeric_roots(&f).unwrap();
        assert_eq!(spectrum.degree(), f.degree().unwrap());
        for root in spectrum.roots() {
            let r = exact_residual(&f, root.value);
            if r / scale <= 1e-8 {
                continue;
            }
            let best = best_nearby_residual(&f, root.value, 4);
            assert!(best / scale > 1e-8, "{f}: residual {:e} at {} but a nearby double reaches {:e}", r / scale, root.value, best / scale);
            assert!(r <= 2.0 * best, "{f}: residual {:e} at {}, best nearby {:e}", r / scale, root.value, best / scale);
            at_limit += 1;
        }
    }
    eprintln!("{at_limit} roots at the double-precision limit");
}

#[test]
fn conjugate_pairs_are_bit_identical() {
    for f in corpus(200, 1..=12, 21) {
        let spectrum = numeric_roots(&f).unwrap();
        for root in spectrum.roots() {
            if root.value.im == 0.0 {
                continue;
            }
            let partner = spectrum
                .roots()
                .iter()
                .find(|r| r.value.re.to_bits() == root.value.re.to_bits() && r.value.im.to_bits() == (-root.value.im).to_bits());
            assert_eq!(partner.map(|r| r.multiplicity), Some(root.multiplicity), "{f}");
        }
    }
}

#[test]
fn sturm_counts_match_the_clustered_spectrum() {
    for f in corpus(300, 1..=10, 33) {
        let sturm = sturm_real_root_count(&f).unwrap();
        let spectrum = numeric_roots(&f).unwrap();
        let radius = CLUSTER_RADIUS * (1.0 + spectrum.max_modulus());
        let real = spectrum.roots().iter().filter(|r| r.value.im.abs() < radius).count();
        assert_eq!(sturm.distinct_real, real, "{f}");
        assert_eq!(sturm.distinct_total, spectrum.roots().len(), "{f}");
    }
}

// ---------------------------------------------------------------------------
// Witnesses and certificates

#[test]
fn interpolation_contract() {
    for f in corpus(300, 2..=8, 55) {
        if classify_real_rooted(&f).unwrap() {
            continue;
        }
        let spectrum = numeric_roots(&f).unwrap();
        for m in [2u32, 4, 6, 8] {
            let omega = Complex64::from_polar(1.0, std::f64::consts::PI / f64::from(m));
            let p = interpolate_witness_poly(&spectrum, omega).unwrap();
            assert!(p.degree().is_none_or(|d| d < spectrum.roots().len()));
            assert!(spectrum.roots().len() <= f.degree().unwrap());
            assert!(p.max_imaginary <= 1e-8, "{f}: imaginary part {:e}", p.max_imaginary);
            assert!((p.eval(p.lambda1) - omega).norm() <= 1e-8, "{f}");
            assert!((p.eval(p.lambda1.conj()) - omega.conj()).norm() <= 1e-8, "{f}");
            for root in spectrum.roots() {
                if root.value != p.lambda1 && root.value != p.lambda1.conj() {
                    assert!(p.eval(root.value).norm() <= 1e-8, "{f}: p({}) = {}", root.value, p.eval(root.value));
                }
            }
        }
    }
}

#[test]
fn exactly_one_certificate_exists() {
    let tol = Tolerances::default();
    let mut extra = vec![
        Polynomial::from_integers(&[1, 0, 1]).pow(2),
        Polynomial::from_roots(&[2, 2, 2, -1]),
        Polynomial::from_integers(&[-5, 1]),
    ];
    extra.extend(corpus(150, 1..=7, 66));
    for f in extra {
        let real = classify_real_rooted(&f).unwrap();
        for m in [2u32, 4] {
            let w = negative_witness(&f, m, &tol);
            let c = psd_certificate(&f, m, &tol);
            assert_eq!(w.is_ok(), !real, "{f}");
            assert_eq!(c.is_ok(), real, "{f}");
            if real {
                assert!(matches!(w, Err(Error::RealRooted)));
            } else {
                assert!(matches!(c, Err(Error::NotRealRooted)));
            }
        }
    }
}
