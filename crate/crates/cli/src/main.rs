use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hypercert_core::certificate::{check_certificate, verify, Certificate, CheckReport};
use hypercert_core::{
    build, h1, parse_divisor, rr_basis, serre_dual, CurveSpec, Divisor, Error, HyperellipticCurve,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hypercert", version, about = "Divisors, cohomology and bundle certificates on hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the genus of the curve.
    Genus {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print a basis of L(D) and h0(D).
    Rr {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
        #[arg(long)]
        json: bool,
    },
    /// Print h1(D) with the dual divisor K - D.
    H1 {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
        #[arg(long)]
        json: bool,
    },
    /// Build the rank-3 example and certify it.
    Construct {
        #[arg(long)]
        curve: PathBuf,
        /// Defaults to the curve file's seed, else 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the certificate instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Recompute every check of a certificate.
    Check {
        cert: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const EXHAUSTED: u8 = 2;
const BAD_INPUT: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SearchExhausted(_) | Error::NoValidSplit(_) | Error::TailBudgetExhausted(_) => EXHAUSTED,
        Error::Parse { .. } | Error::Io(_) | Error::InvalidCurve(_) | Error::InvalidField(_) => BAD_INPUT,
        _ => FAIL,
    }
}

fn load(path: &PathBuf) -> Result<HyperellipticCurve, Error> {
    CurveSpec::load(path)?.curve()
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Genus { curve, json } => {
            let c = load(&curve)?;
            if json {
                println!("{}", json!({ "genus": c.genus(), "f": c.f().to_string(), "field": c.field().to_string() }));
            } else {
                println!("{}", c.genus());
            }
            Ok(PASS)
        }
        Cmd::Rr { curve, divisor, json } => {
            let c = load(&curve)?;
            let d = parse_divisor(&c, &divisor)?;
            let space = rr_basis(&c, &d)?;
            let basis: Vec<String> = space.basis.iter().map(|h| h.to_string()).collect();
            if json {
                println!("{}", json!({ "divisor": d.to_string(), "h0": space.dim(), "basis": basis }));
            } else {
                println!("L({d}) basis: {{{}}}", basis.join(", "));
                println!("h0 = {}", space.dim());
            }
            Ok(PASS)
        }
        Cmd::H1 { curve, divisor, json } => {
            let c = load(&curve)?;
            let d = parse_divisor(&c, &divisor)?;
            let dual = serre_dual(&c, &d);
            let h1v = h1(&c, &d)?;
            let rep = effective_representative(&c, &dual)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "divisor": d.to_string(),
                        "h1": h1v,
                        "dual": dual.to_string(),
                        "dual_effective_representative": rep.as_ref().map(|r| r.to_string()),
                    })
                );
            } else {
                println!("h1 = {h1v}");
                match rep {
                    Some(r) if r != dual => println!("dual divisor K - D = {dual} ~ {r}"),
                    _ => println!("dual divisor K - D = {dual}"),
                }
            }
            Ok(PASS)
        }
        Cmd::Construct { curve, seed, out, json } => {
            let spec = CurveSpec::load(&curve)?;
            let c = spec.curve()?;
            let seed = seed.or(spec.seed).unwrap_or(0);
            let data = build(&c, seed)?;
            let cert = verify(&data);
            let text = cert.to_json();
            if let Some(out) = &out {
                std::fs::write(out, &text)?;
            }
            if json {
                print!("{text}");
            } else {
                summary(&cert);
            }
            Ok(if cert.overall_pass { PASS } else { FAIL })
        }
        Cmd::Check { cert, json } => {
            let text = std::fs::read_to_string(&cert)?;
            let cert = Certificate::from_json(&text)?;
            let report = check_certificate(&cert)?;
            if json {
                let checks: Vec<_> =
                    report.recomputed.checks.iter().map(|c| json!({ "check_id": c.check_id, "pass": c.pass })).collect();
                println!(
                    "{}",
                    json!({ "pass": report.pass(), "checks": checks, "mismatches": report.mismatches })
                );
            } else {
                check_summary(&report);
            }
            Ok(if report.pass() { PASS } else { FAIL })
        }
    }
}

/// An effective divisor linearly equivalent to `d`, if any.
fn effective_representative(c: &HyperellipticCurve, d: &Divisor) -> Result<Option<Divisor>, Error> {
    let space = rr_basis(c, d)?;
    match space.basis.first() {
        Some(s) => Ok(Some(&c.divisor_of(s)? + d)),
        None => Ok(None),
    }
}

fn summary(cert: &Certificate) {
    let k = &cert.construction;
    println!("genus {} over {}, seed {}", cert.curve.genus, cert.curve.field, cert.seed);
    println!("P = {}  D = {}  D_Q = {}  D_R = {}", k.p, k.d, k.d_q, k.d_r);
    println!("theta = {}", k.theta.tails);
    for c in &cert.checks {
        println!("{:<4} {}  {}", c.check_id, if c.pass { "pass" } else { "FAIL" }, c.statement);
    }
    let passed = cert.checks.iter().filter(|c| c.pass).count();
    println!("overall: {} ({passed}/{} checks)", if cert.overall_pass { "pass" } else { "FAIL" }, cert.checks.len());
}

fn check_summary(r: &CheckReport) {
    for c in &r.recomputed.checks {
        println!("{:<4} {}  {}", c.check_id, if c.pass { "pass" } else { "FAIL" }, c.statement);
    }
    for m in &r.mismatches {
        println!("mismatch: {m}");
    }
    println!("certificate: {}", if r.pass() { "verified" } else { "REJECTED" });
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { BAD_INPUT } else { PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::SearchExhausted(_) = e {
                eprintln!("hint: add rational points under `hints` in the curve file, or try another --seed");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
