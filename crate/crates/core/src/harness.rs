//! Seeded random corpora and the Hermite / Sturm / certificate consistency
//! pipeline shared by the test suites and the `bench` command.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forms::build_form_exact;
use crate::poly::Polynomial;
use crate::psd::{classify_real_rooted, estimate_min_on_sphere, SphereSearch};
use crate::sturm::sturm_real_root_count;
use crate::witness::{negative_witness, psd_certificate, verify_certificate, Certificate, Tolerances};

/// Parameters of a random corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSpec {
    pub count: usize,
    pub degrees: RangeInclusive<usize>,
    /// Range for integer coefficients, and for the integer roots of
    /// forced real-rooted entries.
    pub coeffs: RangeInclusive<i64>,
    pub seed: u64,
    pub forced_real: f64,
    pub forced_non_real: f64,
    /// Fraction of forced real-rooted entries with one repeated root.
    pub repeated_root: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            count: 1000,
            degrees: 1..=8,
            coeffs: -9..=9,
            seed: 0,
            forced_real: 0.4,
            forced_non_real: 0.4,
            repeated_root: 0.1,
        }
    }
}

impl CorpusSpec {
    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidCorpus(what.to_string()));
        if self.count == 0 {
            return bad("count must be at least 1");
        }
        if self.degrees.is_empty() || *self.degrees.start() == 0 {
            return bad("degree range must be nonempty and start at 1 or more");
        }
        if self.coeffs.is_empty() {
            return bad("coefficient range is empty");
        }
        if *self.coeffs.start() == 0 && *self.coeffs.end() == 0 {
            return bad("coefficient range contains no nonzero value");
        }
        let fractions = [self.forced_real, self.forced_non_real, self.repeated_root];
        if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) || self.forced_real + self.forced_non_real > 1.0 {
            return bad("fractions must lie in [0, 1] and the forced fractions sum to at most 1");
        }
        if self.forced_non_real > 0.0 && !self.coeffs.contains(&1) {
            return bad("forced non-real entries need 1 in the coefficient range");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    ForcedReal,
    ForcedNonReal,
    Uniform,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub poly: Polynomial,
    pub kind: EntryKind,
}

/// `Π (t - a)` over the given integer roots.
pub fn forced_real(roots: &[i64]) -> Polynomial {
    Polynomial::from_roots(roots)
}

/// `(t² + bt + c) · cofactor`; requires `b² < 4c`.
pub fn forced_non_real(b: i64, c: i64, cofactor: &Polynomial) -> Result<Polynomial> {
    if b * b >= 4 * c {
        return Err(Error::InvalidCorpus(format!("t^2 + {b}t + {c} has real roots")));
    }
    Ok(&Polynomial::from_integers(&[c, b, 1]) * cofactor)
}

/// Draws the corpus. Entry `i` uses its own generator seeded with
/// `seed ^ i`, so any entry can be reproduced on its own.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusEntry>> {
    spec.validate()?;
    Ok((0..spec.count).map(|i| draw_entry(spec, spec.seed ^ i as u64)).collect())
}

fn draw_entry(spec: &CorpusSpec, seed: u64) -> CorpusEntry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = rng.random();
    let kind = if u < spec.forced_real {
        EntryKind::ForcedReal
    } else if u < spec.forced_real + spec.forced_non_real {
        EntryKind::ForcedNonReal
    } else {
        EntryKind::Uniform
    };
    let mut degree = rng.random_range(spec.degrees.clone());
    let poly = match kind {
        EntryKind::ForcedReal => {
            let mut roots: Vec<i64> = (0..degree).map(|_| rng.random_range(spec.coeffs.clone())).collect();
            if degree >= 2 && rng.random_bool(spec.repeated_root) {
                let from = rng.random_range(0..degree);
                let to = (from + 1 + rng.random_range(0..degree - 1)) % degree;
                roots[to] = roots[from];
            }
            forced_real(&roots)
        }
        EntryKind::ForcedNonReal => {
            if degree < 2 {
                let lo = (*spec.degrees.start()).max(2);
                let hi = (*spec.degrees.end()).max(2);
                degree = rng.random_range(lo..=hi);
            }
            let (b, c) = (0..64)
                .map(|_| (rng.random_range(spec.coeffs.clone()), rng.random_range(spec.coeffs.clone())))
                .find(|&(b, c)| b * b < 4 * c)
                .unwrap_or((0, 1));
            let cofactor = random_integer_poly(&mut rng, degree - 2, &spec.coeffs);
            forced_non_real(b, c, &cofactor).expect("discriminant checked")
        }
        EntryKind::Uniform => random_integer_poly(&mut rng, degree, &spec.coeffs),
    };
    CorpusEntry { poly, kind }
}

fn random_integer_poly(rng: &mut ChaCha8Rng, degree: usize, range: &RangeInclusive<i64>) -> Polynomial {
    let mut coeffs: Vec<i64> = (0..degree).map(|_| rng.random_range(range.clone())).collect();
    let lead = loop {
        let v = rng.random_range(range.clone());
        if v != 0 {
            break v;
        }
    };
    coeffs.push(lead);
    Polynomial::from_integers(&coeffs)
}

/// Settings for [`run_consistency`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyOptions {
    pub tolerances: Tolerances,
    /// Sphere search run on real-rooted inputs; `None` skips it.
    pub sphere: Option<SphereSearch>,
    /// Lower bound accepted from the sphere search.
    pub sphere_tolerance: f64,
}

impl Default for ConsistencyOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            sphere: Some(SphereSearch {
                restarts: 4,
                steps: 100,
                ..SphereSearch::default()
            }),
            sphere_tolerance: 1e-7,
        }
    }
}

/// Outcome for one polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub index: usize,
    pub degree: usize,
    pub hermite_real_rooted: bool,
    pub sturm_real_rooted: bool,
    /// `(m, Φ_m(x), μ)` for each witness that verified.
    pub witness_values: Vec<(u32, f64, usize)>,
    pub max_witness_residual: f64,
    pub max_cert_residual: f64,
    pub min_sphere_value: Option<f64>,
    pub failures: Vec<String>,
    pub wall_ms_hermite: f64,
    pub wall_ms_sturm: f64,
    pub wall_ms_witness: f64,
}

impl TrialRecord {
    pub fn is_mismatch(&self) -> bool {
        self.hermite_real_rooted != self.sturm_real_rooted
    }
}

/// Aggregates over all trials of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeRow {
    pub degree: usize,
    pub count: usize,
    pub n_real_rooted: usize,
    pub mismatches: usize,
    pub failures: usize,
    pub max_witness_residual: f64,
    pub max_cert_residual: f64,
    pub wall_ms_hermite: f64,
    pub wall_ms_sturm: f64,
    pub wall_ms_witness: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConsistencyReport {
    pub trials: Vec<TrialRecord>,
}

pub const CSV_HEADER: &str =
    "degree,n_real_rooted,mismatches,max_witness_residual,max_cert_residual,wall_ms_hermite,wall_ms_sturm,wall_ms_witness";

impl ConsistencyReport {
    pub fn mismatches(&self) -> usize {
        self.trials.iter().filter(|t| t.is_mismatch()).count()
    }

    pub fn failures(&self) -> Vec<String> {
        self.trials
            .iter()
            .flat_map(|t| t.failures.iter().map(move |f| format!("trial {}: {f}", t.index)))
            .collect()
    }

    pub fn max_witness_residual(&self) -> f64 {
        self.trials.iter().map(|t| t.max_witness_residual).fold(0.0, f64::max)
    }

    pub fn max_cert_residual(&self) -> f64 {
        self.trials.iter().map(|t| t.max_cert_residual).fold(0.0, f64::max)
    }

    pub fn min_sphere_value(&self) -> Option<f64> {
        self.trials.iter().filter_map(|t| t.min_sphere_value).reduce(f64::min)
    }

    pub fn by_degree(&self) -> Vec<DegreeRow> {
        let mut rows: Vec<DegreeRow> = Vec::new();
        let mut degrees: Vec<usize> = self.trials.iter().map(|t| t.degree).collect();
        degrees.sort_unstable();
        degrees.dedup();
        for degree in degrees {
            let mut row = DegreeRow {
                degree,
                count: 0,
                n_real_rooted: 0,
                mismatches: 0,
                failures: 0,
                max_witness_residual: 0.0,
                max_cert_residual: 0.0,
                wall_ms_hermite: 0.0,
                wall_ms_sturm: 0.0,
                wall_ms_witness: 0.0,
            };
            for t in self.trials.iter().filter(|t| t.degree == degree) {
                row.count += 1;
                row.n_real_rooted += usize::from(t.hermite_real_rooted);
                row.mismatches += usize::from(t.is_mismatch());
                row.failures += t.failures.len();
                row.max_witness_residual = row.max_witness_residual.max(t.max_witness_residual);
                row.max_cert_residual = row.max_cert_residual.max(t.max_cert_residual);
                row.wall_ms_hermite += t.wall_ms_hermite;
                row.wall_ms_sturm += t.wall_ms_sturm;
                row.wall_ms_witness += t.wall_ms_witness;
            }
            rows.push(row);
        }
        rows
    }

    /// CSV with one row per degree. Timing columns are left empty unless
    /// `timings` is set, which keeps the output reproducible.
    pub fn to_csv(&self, timings: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in self.by_degree() {
            let _ = write!(
                out,
                "{},{},{},{:e},{:e},",
                r.degree, r.n_real_rooted, r.mismatches, r.max_witness_residual, r.max_cert_residual
            );
            if timings {
                let _ = writeln!(out, "{:.3},{:.3},{:.3}", r.wall_ms_hermite, r.wall_ms_sturm, r.wall_ms_witness);
            } else {
                out.push_str(",,\n");
            }
        }
        out
    }

    pub fn to_text(&self, timings: bool) -> String {
        let mut out = String::new();
        let _ = write!(
            out,
            "{:>6} {:>6} {:>6} {:>10} {:>8} {:>12} {:>12}",
            "degree", "count", "real", "mismatches", "failures", "max_witness", "max_cert"
        );
        if timings {
            let _ = write!(out, " {:>11} {:>11} {:>11}", "ms_hermite", "ms_sturm", "ms_witness");
        }
        out.push('\n');
        for r in self.by_degree() {
            let _ = write!(
                out,
                "{:>6} {:>6} {:>6} {:>10} {:>8} {:>12.3e} {:>12.3e}",
                r.degree, r.count, r.n_real_rooted, r.mismatches, r.failures, r.max_witness_residual, r.max_cert_residual
            );
            if timings {
                let _ = write!(
                    out,
                    " {:>11.3} {:>11.3} {:>11.3}",
                    r.wall_ms_hermite, r.wall_ms_sturm, r.wall_ms_witness
                );
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "total: {} polynomials, {} mismatches, {} failures",
            self.trials.len(),
            self.mismatches(),
            self.failures().len()
        );
        out
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs every polynomial through the exact Hermite test and the Sturm
/// oracle, then builds and re-verifies a certificate for each even `m` in
/// `m_list`. An empty `m_list` compares the two decisions only.
pub fn run_consistency(corpus: &[Polynomial], m_list: &[u32], options: &ConsistencyOptions) -> Result<ConsistencyReport> {
    for &m in m_list {
        if m == 0 {
            return Err(Error::ZeroFormDegree);
        }
        if m % 2 == 1 {
            return Err(Error::OddFormDegree(m));
        }
    }
    let trials = corpus
        .iter()
        .enumerate()
        .map(|(index, f)| run_trial(index, f, m_list, options))
        .collect();
    Ok(ConsistencyReport { trials })
}

fn run_trial(index: usize, f: &Polynomial, m_list: &[u32], options: &ConsistencyOptions) -> TrialRecord {
    let mut record = TrialRecord {
        index,
        degree: f.degree().unwrap_or(0),
        hermite_real_rooted: false,
        sturm_real_rooted: false,
        witness_values: Vec::new(),
        max_witness_residual: 0.0,
        max_cert_residual: 0.0,
        min_sphere_value: None,
        failures: Vec::new(),
        wall_ms_hermite: 0.0,
        wall_ms_sturm: 0.0,
        wall_ms_witness: 0.0,
    };
    let start = Instant::now();
    let hermite = classify_real_rooted(f);
    record.wall_ms_hermite = millis(start);
    let start = Instant::now();
    let sturm = sturm_real_root_count(f);
    record.wall_ms_sturm = millis(start);
    match (hermite, sturm) {
        (Ok(h), Ok(s)) => {
            record.hermite_real_rooted = h;
            record.sturm_real_rooted = s.is_real_rooted();
        }
        (Err(e), _) | (_, Err(e)) => {
            record.failures.push(format!("classification: {e}"));
            return record;
        }
    }
    if record.is_mismatch() {
        record.failures.push("Hermite and Sturm decisions differ".into());
        return record;
    }

    let tol = &options.tolerances;
    let start = Instant::now();
    for &m in m_list {
        if record.hermite_real_rooted {
            match psd_certificate(f, m, tol) {
                Ok(cert) => {
                    let report = verify_certificate(f, &Certificate::PsdDecomposition(cert), tol);
                    record.max_cert_residual = record.max_cert_residual.max(report.residual);
                    if !report.passed {
                        record.failures.push(format!("m = {m}: {}", report.message));
                    }
                }
                Err(e) => record.failures.push(format!("m = {m}: certificate: {e}")),
            }
            if let Some(search) = &options.sphere {
                let min = build_form_exact(f, m).and_then(|form| estimate_min_on_sphere(&form, search));
                match min {
                    Ok(min) => {
                        let v = min.min_value;
                        record.min_sphere_value = Some(record.min_sphere_value.map_or(v, |w| w.min(v)));
                        if v < -options.sphere_tolerance {
                            record.failures.push(format!("m = {m}: sphere minimum {v:e}"));
                        }
                    }
                    Err(e) => record.failures.push(format!("m = {m}: sphere search: {e}")),
                }
            }
        } else {
            match negative_witness(f, m, tol) {
                Ok(w) => {
                    let report = verify_certificate(f, &Certificate::NegativeWitness(w.clone()), tol);
                    record.max_witness_residual = record.max_witness_residual.max(report.residual);
                    match report.value {
                        Some(v) if report.passed => record.witness_values.push((m, v, w.mu)),
                        _ => record.failures.push(format!("m = {m}: {}", report.message)),
                    }
                }
                Err(e) => record.failures.push(format!("m = {m}: witness: {e}")),
            }
        }
    }
    record.wall_ms_witness = millis(start);
    record
}
