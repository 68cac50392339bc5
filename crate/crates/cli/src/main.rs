//! `qmiddle`: build, verify and inspect Hamiltonian cycles in the middle
//! levels of the projective space graph.
//!
//! Exit codes: 0 ok, 1 invalid certificate or failed property check,
//! 2 usage or parse error, 3 construction failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qmiddle_core::builder::{build_cycle_k1, build_cycle_k2, BuildError, BuildOptions};
use qmiddle_core::certificate::{CertificateError, CycleCertificate};
use qmiddle_core::field::{prime_power, FieldTable, DEFAULT_MAX_ELEMENTS};
use qmiddle_core::geometry::{gaussian_coefficient, Geometry};
use qmiddle_core::orbits::ClassTable;
use qmiddle_core::verifier::{
    oracle_sweep, run_property_suite, verify_certificate, SuiteMode, DEFAULT_SAMPLE_SEED,
};

/// Environment variable overriding the largest field (in elements) the tool will tabulate.
const MAX_FIELD_ENV: &str = "QMIDDLE_MAX_FIELD_SIZE";

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONSTRUCTION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qmiddle",
    version,
    about = "Hamiltonian cycles in the middle levels of P_q(3) and P_q(5)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a cycle and write its certificate.
    Build(BuildArgs),
    /// Check a certificate independently of the builder.
    Verify(VerifyArgs),
    /// Run the property suite and the echelon cross-check.
    Props(PropsArgs),
    /// Print class counts, Grassmannian sizes and the special-partner table.
    Stats(StatsArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Field order, a prime power.
    #[arg(long)]
    q: u64,
    /// Middle level: 1 for P_q(3), 2 for P_q(5).
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=2))]
    k: u32,
    /// Seed for the class orders (k = 2).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shift between consecutive copies (k = 1), coprime to q^2 + q + 1.
    #[arg(long, default_value_t = 1)]
    ell: u32,
    /// Defining polynomial over GF(q), ascending coefficients, e.g. `1,0,1,0,0,1`.
    #[arg(long, value_delimiter = ',')]
    poly: Option<Vec<u32>>,
    /// Only accept plans whose shift is coprime to s, trying later seeds if needed (k = 2).
    #[arg(long)]
    require_coprime: bool,
    /// Extra seeds tried with --require-coprime.
    #[arg(long, default_value_t = 64)]
    max_retries: u32,
    /// Certificate path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file.
    path: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PropsArgs {
    #[arg(long)]
    q: u64,
    /// Check every subspace (default for q <= 3).
    #[arg(long, conflicts_with = "sampled")]
    exhaustive: bool,
    /// Check a seeded random sample (default for q >= 4).
    #[arg(long)]
    sampled: bool,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Corrupt one entry of the line table before running.
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    json: bool,
}

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
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Props(args) => cmd_props(args),
        Command::Stats(args) => cmd_stats(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn max_elements() -> Result<u64, Failure> {
    match std::env::var(MAX_FIELD_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{MAX_FIELD_ENV}={v} is not a number"))),
        Err(_) => Ok(DEFAULT_MAX_ELEMENTS),
    }
}

fn field(q: u64, n: u32, poly: Option<&[u32]>) -> Result<FieldTable, Failure> {
    let (p, m) =
        prime_power(q).ok_or_else(|| Failure::usage(format!("q = {q} is not a prime power")))?;
    FieldTable::build_bounded(p, m, n, poly, max_elements()?)
        .map_err(|e| Failure::usage(e.to_string()))
}

fn build_failure(err: BuildError) -> Failure {
    match err {
        BuildError::Precondition(msg) => Failure::usage(msg),
        other => Failure {
            code: EXIT_CONSTRUCTION,
            message: other.to_string(),
        },
    }
}

fn cmd_build(args: BuildArgs) -> Result<u8, Failure> {
    let start = Instant::now();
    let geo = Geometry::new(field(args.q, 2 * args.k + 1, args.poly.as_deref())?);
    let cert = if args.k == 1 {
        build_cycle_k1(&geo, args.ell).map_err(build_failure)?
    } else {
        let classes = ClassTable::build(&geo).map_err(|e| Failure {
            code: EXIT_CONSTRUCTION,
            message: e.to_string(),
        })?;
        let options = BuildOptions {
            require_coprime: args.require_coprime,
            max_retries: args.max_retries,
            orders: None,
        };
        build_cycle_k2(&geo, &classes, args.seed, &options)
            .map_err(build_failure)?
            .0
    };
    let elapsed = start.elapsed();
    let summary = format!(
        "q={} k={} seed={} vertices={} ell={} g={} flips={} elapsed={:.1}ms",
        cert.q,
        cert.k,
        cert.meta.seed,
        cert.vertices.len(),
        cert.meta.ell,
        cert.meta.g,
        cert.meta.flips,
        elapsed.as_secs_f64() * 1e3
    );
    match &args.out {
        Some(path) => {
            cert.save(path).map_err(|e| Failure {
                code: EXIT_CONSTRUCTION,
                message: e.to_string(),
            })?;
            println!("{summary}");
            println!("wrote {}", path.display());
        }
        None => {
            print!("{}", cert.to_json());
            eprintln!("{summary}");
        }
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let cert = CycleCertificate::load(&args.path).map_err(|e| match e {
        CertificateError::Io(err) => Failure::usage(format!("{}: {err}", args.path.display())),
        parse => Failure::usage(format!("{}: {parse}", args.path.display())),
    })?;
    let report = verify_certificate(&cert);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        println!("{report}");
    }
    Ok(if report.is_valid() { 0 } else { EXIT_INVALID })
}

fn cmd_props(args: PropsArgs) -> Result<u8, Failure> {
    let mut geo = Geometry::new(field(args.q, 5, None)?);
    if args.inject_fault {
        geo.inject_span_fault(1, 2);
    }
    let mode = if args.exhaustive {
        SuiteMode::Exhaustive
    } else if args.sampled || args.q > 3 {
        SuiteMode::Sampled {
            seed: args.seed,
            samples: args.samples,
        }
    } else {
        SuiteMode::Exhaustive
    };
    let mut report = run_property_suite(&geo, mode);
    report.checks.push(oracle_sweep(&geo, mode).as_check());
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        println!("{report}");
    }
    Ok(if report.all_passed() { 0 } else { EXIT_INVALID })
}

fn cmd_stats(args: StatsArgs) -> Result<u8, Failure> {
    let geo = Geometry::new(field(args.q, 5, None)?);
    let classes = ClassTable::build(&geo).map_err(|e| Failure {
        code: EXIT_CONSTRUCTION,
        message: e.to_string(),
    })?;
    let q = args.q;
    let lines = gaussian_coefficient::<u64>(q, 5, 2).map_err(|e| Failure::usage(e.to_string()))?;
    let planes = gaussian_coefficient::<u64>(q, 5, 3).map_err(|e| Failure::usage(e.to_string()))?;
    let partners: Vec<_> = classes
        .plane_classes()
        .iter()
        .map(|c| {
            let l = classes.special_partner(c.id);
            json!({ "plane_class": c.id, "plane_rep": c.rep, "line_class": l, "line_rep": classes.line_classes()[l].rep })
        })
        .collect();
    if args.json {
        let out = json!({
            "q": q,
            "s": geo.s(),
            "line_classes": classes.line_classes().len(),
            "plane_classes": classes.plane_classes().len(),
            "lines": lines,
            "planes": planes,
            "special_partners": partners,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("stats serialize")
        );
    } else {
        println!("q = {q}, s = {}", geo.s());
        println!(
            "line classes: {}, plane classes: {}",
            classes.line_classes().len(),
            classes.plane_classes().len()
        );
        println!("lines: {lines}, planes: {planes}");
        println!("special partners (plane class -> line class):");
        for c in classes.plane_classes() {
            let l = classes.special_partner(c.id);
            println!(
                "  {:>3} {} -> {:>3} {}",
                c.id,
                c.rep,
                l,
                classes.line_classes()[l].rep
            );
        }
    }
    Ok(0)
}
