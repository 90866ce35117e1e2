//! `loglog`: file-in, report-out front end for `loglog-core`.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage, IO or parse
//! errors. Every failure writes one JSON line `{"error": .., "message": ..}`
//! to the error stream.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use loglog_core::bound::{bound_case_a, bound_case_b, write_trace_csv, BoundReport};
use loglog_core::certificates::{Certificate, CertificateFile};
use loglog_core::lab::{empirical_alpha, validate_bound, FamilySpec, Point};
use loglog_core::majorant::{DistributionFunction, LemmaReport, Majorant, MajorantFile};
use loglog_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "loglog",
    version,
    about = "Explicit log log bounds from three-balls certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrability verdicts and distribution function of a majorant.
    AnalyzeMajorant {
        #[arg(long)]
        majorant: PathBuf,
        /// Growth rate `a` of the tail sum Σ_{k≥0} F(e^{ak}).
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-express a three-balls certificate on other radius ratios.
    ConvertCert {
        #[arg(long)]
        cert: PathBuf,
        /// Target ratios `a,b` with 1 < a < b.
        #[arg(long, value_parser = parse_pair)]
        target: (f64, f64),
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform bound as a JSON report.
    Bound(BoundArgs),
    /// Iteration trace of a bound as CSV.
    Trace(BoundArgs),
    /// Worst-case three-balls exponent of a sample family, with C = 1.
    EstimateAlpha {
        /// Sample family JSON.
        #[arg(long)]
        grid: PathBuf,
        /// Overrides the family's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Ball radius ratios `a,b`.
        #[arg(long, value_parser = parse_pair, default_value = "2,4")]
        ratios: (f64, f64),
        /// Inner radius `r`, centred at the origin.
        #[arg(long, default_value_t = 0.25)]
        scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a bound against a sample family, as CSV.
    Validate {
        #[command(flatten)]
        bound: BoundArgs,
        /// Sample family JSON.
        #[arg(long)]
        grid: PathBuf,
        /// Overrides the family's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    A,
    B,
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// A: wild-set certificate; B: three-balls certificate and symmetric
    /// nonincreasing majorant.
    #[arg(long, value_enum, ignore_case = true)]
    case: CaseArg,
    #[arg(long)]
    majorant: PathBuf,
    #[arg(long)]
    cert: PathBuf,
    /// Distance from the compact set to the boundary, in (0, 1].
    #[arg(long)]
    dist: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

/// Failure of a single invocation, mapped to an exit code and a stable code.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Usage(String),
    Io(String),
    Parse(String),
}

impl Failure {
    /// Malformed inputs count as usage errors even when the library
    /// detects them.
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain(
                Error::InvalidArgument(_)
                | Error::InvalidMajorant(_)
                | Error::InvalidCertificate(_),
            ) => 2,
            Failure::Domain(_) => 1,
            _ => 2,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            Failure::Domain(e) => e.code(),
            Failure::Usage(_) => "usage-error",
            Failure::Io(_) => "io-error",
            Failure::Parse(_) => "parse-error",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Usage(m) | Failure::Io(m) | Failure::Parse(m) => m.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs one invocation; `stdout` receives reports unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let message = e.kind().to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or(&message);
            let first = first.strip_prefix("error: ").unwrap_or(first);
            return report_failure(&Failure::Usage(first.to_string()), stderr);
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(f) => report_failure(&f, stderr),
    }
}

fn report_failure(f: &Failure, stderr: &mut dyn Write) -> i32 {
    let obj = serde_json::json!({ "error": f.code(), "message": f.message() });
    let _ = writeln!(stderr, "{obj}");
    f.exit_code()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_majorant(path: &Path) -> Outcome<Majorant> {
    Ok(Majorant::try_from(read_json::<MajorantFile>(path)?)?)
}

fn load_certificate(path: &Path) -> Outcome<Certificate> {
    Ok(Certificate::try_from(read_json::<CertificateFile>(path)?)?)
}

fn load_family(path: &Path, seed: Option<u64>) -> Outcome<FamilySpec> {
    let mut family: FamilySpec = read_json(path)?;
    if let Some(seed) = seed {
        family.seed = seed;
    }
    Ok(family)
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> Outcome<()> {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => stdout
            .write_all(bytes)
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Outcome<()> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
    bytes.push(b'\n');
    emit(&bytes, out, stdout)
}

#[derive(Serialize)]
struct MajorantAnalysis {
    majorant: MajorantFile,
    rate: f64,
    #[serde(flatten)]
    lemma: LemmaReport,
    verdict: &'static str,
    symmetric_monotone: bool,
    distribution_function: DistributionFunction,
}

#[derive(Serialize)]
struct ConversionReport {
    certificate: CertificateFile,
    steps: usize,
    schedule: Vec<f64>,
}

fn compute_bound(args: &BoundArgs) -> Outcome<BoundReport> {
    let m = load_majorant(&args.majorant)?;
    let report = match (args.case, load_certificate(&args.cert)?) {
        (CaseArg::A, Certificate::WildSet(c)) => bound_case_a(&m, &c, args.dist)?,
        (CaseArg::B, Certificate::ThreeBalls(c)) => bound_case_b(&m, &c, args.dist)?,
        (CaseArg::A, _) => {
            return Err(Failure::Usage("case A needs a wild-set certificate".into()))
        }
        (CaseArg::B, _) => {
            return Err(Failure::Usage(
                "case B needs a three-balls certificate".into(),
            ))
        }
    };
    Ok(report)
}

fn execute(command: Command, stdout: &mut dyn Write) -> Outcome<()> {
    match command {
        Command::AnalyzeMajorant {
            majorant,
            rate,
            out,
        } => {
            let m = load_majorant(&majorant)?;
            let lemma = m.lemma_check(rate)?;
            let verdict = match (lemma.integral_finite, lemma.tail_finite) {
                (true, true) => "finite",
                (false, false) => "divergent",
                _ => "inconsistent",
            };
            let report = MajorantAnalysis {
                majorant: MajorantFile::from(&m),
                rate,
                lemma,
                verdict,
                symmetric_monotone: m.is_symmetric_monotone(),
                distribution_function: m.distribution_function(),
            };
            emit_json(&report, out.as_deref(), stdout)
        }
        Command::ConvertCert { cert, target, out } => {
            let Certificate::ThreeBalls(c) = load_certificate(&cert)? else {
                return Err(Failure::Usage(
                    "convert-cert needs a three-balls certificate".into(),
                ));
            };
            let conversion = c.convert_ratios(target.0, target.1)?;
            let report = ConversionReport {
                certificate: CertificateFile::from(&conversion.certificate),
                steps: conversion.steps(),
                schedule: conversion.schedule.clone(),
            };
            emit_json(&report, out.as_deref(), stdout)
        }
        Command::Bound(args) => {
            let report = compute_bound(&args)?;
            emit_json(&report, args.out.as_deref(), stdout)
        }
        Command::Trace(args) => {
            let report = compute_bound(&args)?;
            let mut bytes = Vec::new();
            write_trace_csv(&report.trace, &mut bytes).expect("writing to memory");
            emit(&bytes, args.out.as_deref(), stdout)
        }
        Command::EstimateAlpha {
            grid,
            seed,
            ratios,
            scale,
            out,
        } => {
            let samples = load_family(&grid, seed)?.build()?;
            let estimate = empirical_alpha(&samples, Point::ORIGIN, ratios, scale)?;
            emit_json(&estimate, out.as_deref(), stdout)
        }
        Command::Validate { bound, grid, seed } => {
            let report = compute_bound(&bound)?;
            let m = load_majorant(&bound.majorant)?;
            let family = load_family(&grid, seed)?;
            let validation = validate_bound(&m, &report, &family)?;
            let mut bytes = Vec::new();
            validation.write_csv(&mut bytes).expect("writing to memory");
            emit(&bytes, bound.out.as_deref(), stdout)
        }
    }
}
