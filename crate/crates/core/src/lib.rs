//! Exact and certified tests for whether a univariate polynomial has only
//! real roots, built on the even-degree forms `Φ_m` attached to its roots.
//!
//! The pipeline: parse a polynomial, compute root power sums exactly,
//! decide real-rootedness from the Hermite matrix, and back the decision
//! with a certificate (a negative value of `Φ_m`, or a decomposition of
//! `Φ_m` into even powers of real linear forms).

pub mod error;
pub mod forms;
pub mod harness;
pub mod parse;
pub mod poly;
pub mod psd;
pub mod rational;
pub mod roots;
pub mod sturm;
pub mod witness;

pub use error::{Error, Result};
pub use forms::{
    build_form_exact, build_form_from_rational_roots, build_form_from_roots, evaluate_via_powers,
    exponent_vectors, linear_forms, max_route_deviation, multinomial, ExactForm, FloatForm, MAdicForm,
};
pub use harness::{generate_corpus, run_consistency, ConsistencyOptions, ConsistencyReport, CorpusSpec};
pub use parse::parse_polynomial;
pub use poly::{power_sums, Polynomial, PowerSums};
pub use psd::{classify_real_rooted, estimate_min_on_sphere, hermite_matrix, is_psd_exact, HermiteMatrix, SphereSearch};
pub use roots::{numeric_roots, DistinctRoot, RootSpectrum};
pub use sturm::{sturm_real_root_count, SturmCount};
pub use witness::{
    negative_witness, psd_certificate, verify_certificate, Certificate, NegativeWitness, PsdCertificate,
    Tolerances, VerificationReport,
};
