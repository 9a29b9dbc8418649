use std::fs;
use std::io::{self, Read};
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use realroot::harness::ConsistencyOptions;
use realroot::witness::{CertificateKind, CERTIFICATE_TOLERANCE, WITNESS_TOLERANCE};
use realroot::{
    build_form_exact, classify_real_rooted, generate_corpus, negative_witness, parse_polynomial,
    psd_certificate, run_consistency, sturm_real_root_count, verify_certificate, Certificate, CorpusSpec,
    Error, Polynomial, Tolerances, VerificationReport,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "realroot", version, about = "Decide and certify whether a polynomial has only real roots")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Verification tolerance (witness value and decomposition coefficients).
    #[arg(long, global = true, env = "REALROOT_TOL")]
    tol: Option<f64>,

    /// Random seed for the sphere search and the benchmark corpus.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact real-rootedness decision with a Sturm cross-check.
    Classify(PolyArg),
    /// Print the form Φ_m of a polynomial.
    Form(FormArgs),
    /// Negative witness for a polynomial with a non-real root.
    Witness(FormArgs),
    /// Certificate for either answer: a witness or a sum of even powers.
    Certify(FormArgs),
    /// Re-check a certificate against a polynomial.
    Verify(VerifyArgs),
    /// Differential test over a random corpus.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct PolyArg {
    /// Coefficients "c0,c1,...,cn" (ascending) or an expression in one
    /// variable; "-" reads standard input.
    #[arg(allow_hyphen_values = true)]
    poly: String,
}

#[derive(Args, Debug)]
struct FormArgs {
    #[command(flatten)]
    poly: PolyArg,
    /// Degree of the form.
    #[arg(long, default_value_t = 2)]
    m: u32,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    poly: PolyArg,
    /// Certificate JSON file, or "-" for standard input.
    #[arg(long)]
    cert: String,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Degree range "lo..hi" (inclusive).
    #[arg(long, default_value = "1..8", value_parser = parse_range::<usize>, allow_hyphen_values = true)]
    deg: RangeInclusive<usize>,
    /// Integer coefficient range "lo..hi" (inclusive).
    #[arg(long, default_value = "-9..9", value_parser = parse_range::<i64>, allow_hyphen_values = true)]
    coeff: RangeInclusive<i64>,
    /// Fill the wall-clock columns (makes the output run-dependent).
    #[arg(long)]
    timings: bool,
}

fn parse_range<T>(text: &str) -> Result<RangeInclusive<T>, String>
where
    T: std::str::FromStr + PartialOrd,
{
    let (lo, hi) = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .ok_or_else(|| format!("expected lo..hi, got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<T>().map_err(|_| format!("bad bound {s:?}"));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok(lo..=hi)
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn fail(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::RealRooted | Error::NotRealRooted | Error::VerificationFailed(_) => Failure::fail(e.to_string()),
            Error::NoConvergence { .. } | Error::ImaginaryResidue { .. } | Error::IllConditioned(_) => {
                Failure::fail(e.to_string())
            }
            _ => Failure::usage(e.to_string()),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Bench(_)) {
        return Err(Failure::usage("--format csv is only available for bench"));
    }
    let tol = tolerances(cli.tol)?;
    match &cli.command {
        Command::Classify(a) => classify(cli, &read_poly(a)?),
        Command::Form(a) => form(cli, &read_poly(&a.poly)?, a.m),
        Command::Witness(a) => witness(cli, &read_poly(&a.poly)?, a.m, &tol),
        Command::Certify(a) => certify(cli, &read_poly(&a.poly)?, a.m, &tol),
        Command::Verify(a) => verify(cli, a, &tol),
        Command::Bench(a) => bench(cli, a, &tol),
    }
}

fn tolerances(tol: Option<f64>) -> Result<Tolerances, Failure> {
    match tol {
        None => Ok(Tolerances {
            witness: WITNESS_TOLERANCE,
            certificate: CERTIFICATE_TOLERANCE,
        }),
        Some(t) if t.is_finite() && t > 0.0 => Ok(Tolerances::uniform(t)),
        Some(t) => Err(Failure::usage(format!("tolerance must be positive, got {t}"))),
    }
}

fn read_stdin() -> Result<String, Failure> {
    let mut text = String::new();
    io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| Failure::usage(format!("reading standard input: {e}")))?;
    Ok(text)
}

fn read_poly(arg: &PolyArg) -> Result<Polynomial, Failure> {
    let text = if arg.poly == "-" { read_stdin()? } else { arg.poly.clone() };
    let f = parse_polynomial(text.trim())?;
    f.analysis_degree()?;
    Ok(f)
}

fn require_even(m: u32) -> Result<(), Failure> {
    match m {
        0 => Err(Error::ZeroFormDegree.into()),
        m if m % 2 == 1 => Err(Failure::usage(format!(
            "m = {m} is odd; Φ_m changes sign under x -> -x, so only even m carries a certificate"
        ))),
        _ => Ok(()),
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json serialises"));
}

fn classify(cli: &Cli, f: &Polynomial) -> CmdResult {
    let hermite = classify_real_rooted(f)?;
    let sturm = sturm_real_root_count(f)?;
    let agree = hermite == sturm.is_real_rooted();
    match cli.format {
        Format::Json => print_json(&json!({
            "polynomial": f.to_coeff_list(),
            "real_rooted": hermite,
            "hermite_psd": hermite,
            "sturm_distinct_real": sturm.distinct_real,
            "sturm_distinct_roots": sturm.distinct_total,
            "agree": agree,
        })),
        _ => {
            println!("{}", if hermite { "real-rooted" } else { "has non-real roots" });
            println!(
                "hermite: {} (exact)",
                if hermite { "positive semidefinite" } else { "not positive semidefinite" }
            );
            println!(
                "sturm: {} distinct real of {} distinct roots ({})",
                sturm.distinct_real,
                sturm.distinct_total,
                if agree { "agrees" } else { "DISAGREES" }
            );
        }
    }
    if !agree {
        return Err(Failure::fail("Hermite and Sturm decisions differ"));
    }
    Ok(if hermite { 0 } else { EXIT_FAIL })
}

fn form(cli: &Cli, f: &Polynomial, m: u32) -> CmdResult {
    if m == 0 {
        return Err(Error::ZeroFormDegree.into());
    }
    let form = build_form_exact(f, m)?;
    match cli.format {
        Format::Json => println!("{}", form.to_json()),
        _ => println!("{form}"),
    }
    Ok(0)
}

fn witness(cli: &Cli, f: &Polynomial, m: u32, tol: &Tolerances) -> CmdResult {
    require_even(m)?;
    if classify_real_rooted(f)? {
        return Err(Failure::fail(format!(
            "refusing: every root of {f} is real, so Φ_{m} is a sum of even powers of real linear \
             forms and is nonnegative everywhere; no negative witness exists (use certify)"
        )));
    }
    let w = negative_witness(f, m, tol)?;
    emit(cli, f, Certificate::NegativeWitness(w), tol)
}

fn certify(cli: &Cli, f: &Polynomial, m: u32, tol: &Tolerances) -> CmdResult {
    require_even(m)?;
    let cert = if classify_real_rooted(f)? {
        Certificate::PsdDecomposition(psd_certificate(f, m, tol)?)
    } else {
        Certificate::NegativeWitness(negative_witness(f, m, tol)?)
    };
    emit(cli, f, cert, tol)
}

fn report_json(report: &VerificationReport) -> Value {
    serde_json::to_value(report).expect("report serialises")
}

fn report_line(report: &VerificationReport) -> String {
    let kind = match report.kind {
        CertificateKind::NegativeWitness => "negative witness",
        CertificateKind::PsdDecomposition => "sum of even powers",
    };
    format!(
        "verification: {} ({kind}; {}; residual {:e}, tolerance {:e})",
        if report.passed { "pass" } else { "FAIL" },
        report.message,
        report.residual,
        report.tolerance
    )
}

fn emit(cli: &Cli, f: &Polynomial, cert: Certificate, tol: &Tolerances) -> CmdResult {
    let report = verify_certificate(f, &cert, tol);
    match cli.format {
        Format::Json => print_json(&json!({
            "certificate": serde_json::to_value(&cert).expect("certificate serialises"),
            "verification": report_json(&report),
        })),
        _ => {
            println!("{}", cert.to_json());
            eprintln!("{}", report_line(&report));
        }
    }
    Ok(if report.passed { 0 } else { EXIT_FAIL })
}

fn verify(cli: &Cli, args: &VerifyArgs, tol: &Tolerances) -> CmdResult {
    if args.poly.poly == "-" && args.cert == "-" {
        return Err(Failure::usage("polynomial and certificate cannot both come from standard input"));
    }
    let f = read_poly(&args.poly)?;
    let text = if args.cert == "-" {
        read_stdin()?
    } else {
        fs::read_to_string(&args.cert).map_err(|e| Failure::usage(format!("reading {}: {e}", args.cert)))?
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("certificate is not JSON: {e}")))?;
    // Accept both a bare certificate and the {"certificate", "verification"}
    // envelope printed with --format json.
    let inner = value.get("certificate").cloned().unwrap_or(value);
    let cert: Certificate =
        serde_json::from_value(inner).map_err(|e| Failure::usage(format!("invalid certificate: {e}")))?;
    let report = verify_certificate(&f, &cert, tol);
    match cli.format {
        Format::Json => print_json(&report_json(&report)),
        _ => println!("{}", report_line(&report)),
    }
    Ok(if report.passed { 0 } else { EXIT_FAIL })
}

fn bench(cli: &Cli, args: &BenchArgs, tol: &Tolerances) -> CmdResult {
    let spec = CorpusSpec {
        count: args.count,
        degrees: args.deg.clone(),
        coeffs: args.coeff.clone(),
        seed: cli.seed,
        ..CorpusSpec::default()
    };
    let corpus: Vec<Polynomial> = generate_corpus(&spec)?.into_iter().map(|e| e.poly).collect();
    let options = ConsistencyOptions {
        tolerances: *tol,
        sphere: None,
        ..ConsistencyOptions::default()
    };
    let report = run_consistency(&corpus, &[2, 4, 6, 8], &options)?;
    match cli.format {
        Format::Csv => print!("{}", report.to_csv(args.timings)),
        Format::Json => {
            let rows: Vec<Value> = report
                .by_degree()
                .iter()
                .map(|r| {
                    let mut row = json!({
                        "degree": r.degree,
                        "count": r.count,
                        "n_real_rooted": r.n_real_rooted,
                        "mismatches": r.mismatches,
                        "failures": r.failures,
                        "max_witness_residual": r.max_witness_residual,
                        "max_cert_residual": r.max_cert_residual,
                    });
                    if args.timings {
                        row["wall_ms_hermite"] = json!(r.wall_ms_hermite);
                        row["wall_ms_sturm"] = json!(r.wall_ms_sturm);
                        row["wall_ms_witness"] = json!(r.wall_ms_witness);
                    }
                    row
                })
                .collect();
            print_json(&json!({
                "count": report.trials.len(),
                "mismatches": report.mismatches(),
                "failures": report.failures(),
                "rows": rows,
            }));
        }
        Format::Text => print!("{}", report.to_text(args.timings)),
    }
    for failure in report.failures() {
        eprintln!("{failure}");
    }
    Ok(if report.mismatches() == 0 && report.failures().is_empty() {
        0
    } else {
        EXIT_FAIL
    })
}
