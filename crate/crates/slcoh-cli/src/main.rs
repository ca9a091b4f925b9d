//! Command-line front end: relation self-tests, cocycle construction and
//! verification, coboundary recognition, canonicalization with derivation
//! extraction, and first-cohomology dimension reports.
//!
//! Exit codes: 0 = success, 1 = a semantic check failed, 2 = usage or
//! configuration error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use slcoh::cocycle::{
    canonicalize_cocycle, coboundary, derivation_cocycle, elementary_symbols, extract_derivation,
    recognize_coboundary, verify_cocycle, CoboundaryDecision, CocycleSpec, EvaluatedCochain,
    VerifyTrials,
};
use slcoh::field::{DerivationSpec, FieldDescriptor, FieldValue};
use slcoh::h1compute::{h1_report, GeneratorSetChoice, H1Config, H1Error, DEFAULT_ELEMENT_CAP};
use slcoh::relations::{verify_relations, RelationTrials};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "slcoh",
    version,
    about = "Exact 1-cocycle toolkit for SL(n) over the dual adjoint module"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the generator relation identities, exhaustively over small
    /// finite fields and on sampled parameters otherwise
    VerifyRelations(VerifyRelationsArgs),
    /// Compute the Z1/B1/H1 dimension report for SL(n, F_q)
    H1(H1Args),
    /// Build the cochain of a derivation and act on it
    DerivationCocycle(DerivationArgs),
    /// Decide whether a cochain spec file is a coboundary
    Recognize(RecognizeArgs),
}

#[derive(Args)]
struct VerifyRelationsArgs {
    /// Matrix dimension (at least 3)
    #[arg(long)]
    n: usize,
    /// Field descriptor, e.g. `fq:p=2,e=1` or `fpx:p=2`
    #[arg(long)]
    field: String,
    /// Sample count for infinite or large fields
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct H1Args {
    #[arg(long)]
    n: usize,
    /// Field order (prime power)
    #[arg(long)]
    q: u64,
    /// Generating set: `elementary` or `paper42`
    #[arg(long, default_value = "elementary")]
    gens: String,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write the JSON report to this path
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DerivationKindArg {
    Zero,
    Ddx,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ActionArg {
    Emit,
    Verify,
    Recognize,
    Extract,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectArg {
    Coboundary,
    NotCoboundary,
}

#[derive(Args)]
struct DerivationArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    field: String,
    /// The derivation: `zero`, or `ddx` (formal derivative; `fpx` fields only)
    #[arg(long, value_enum)]
    d: DerivationKindArg,
    #[arg(long, value_enum)]
    action: ActionArg,
    /// Probe parameters (comma- or semicolon-separated field values);
    /// 1 is always included
    #[arg(long, default_value = "1,x,x+1,x^2")]
    probes: String,
    #[arg(long)]
    out: Option<String>,
    /// Fail (exit 1) unless recognition matches
    #[arg(long, value_enum)]
    expect: Option<ExpectArg>,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RecognizeArgs {
    /// Cochain spec file (`u(k,h;t) := <matrix>` lines)
    #[arg(long)]
    spec: String,
    /// Field descriptor override (otherwise read from the file header)
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    json: bool,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn check_failed(msg: &str) -> ExitCode {
    eprintln!("check failed: {msg}");
    ExitCode::from(EXIT_CHECK_FAILED)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifyRelations(args) => cmd_verify_relations(args),
        Command::H1(args) => cmd_h1(args),
        Command::DerivationCocycle(args) => cmd_derivation(args),
        Command::Recognize(args) => cmd_recognize(args),
    }
}

fn parse_field(s: &str) -> Result<FieldDescriptor, String> {
    FieldDescriptor::parse(s).map_err(|e| format!("bad field descriptor: {e}"))
}

#[derive(Serialize)]
struct RelationsOut {
    n: usize,
    field: String,
    mode: String,
    checked: usize,
    failures: Vec<String>,
    passed: bool,
}

fn cmd_verify_relations(args: VerifyRelationsArgs) -> ExitCode {
    if args.n < 3 {
        return usage_error("n must be at least 3");
    }
    let desc = match parse_field(&args.field) {
        Ok(d) => d,
        Err(e) => return usage_error(&e),
    };
    let (trials, mode) = match desc.order() {
        Some(q) if q <= 9 => (RelationTrials::Exhaustive, "exhaustive".to_string()),
        _ => (
            RelationTrials::Sampled {
                seed: args.seed,
                count: args.samples,
            },
            format!("sampled({}, {})", args.seed, args.samples),
        ),
    };
    let report = match verify_relations(&desc, args.n, &trials) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    let out = RelationsOut {
        n: args.n,
        field: desc.to_string(),
        mode,
        checked: report.checked,
        failures: report.failures.clone(),
        passed: report.passed(),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!(
            "relations over {} with n={}: {} checks, {} failures ({})",
            out.field,
            out.n,
            out.checked,
            out.failures.len(),
            out.mode
        );
        for f in &out.failures {
            println!("  violated: {f}");
        }
    }
    if out.passed {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}

fn cmd_h1(args: H1Args) -> ExitCode {
    if args.n < 3 {
        return usage_error("n must be at least 3");
    }
    let choice = match GeneratorSetChoice::parse(&args.gens) {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string()),
    };
    let mut cfg = H1Config::new(args.n, args.q, choice);
    cfg.threads = args.threads.max(1);
    if let Ok(v) = std::env::var("H1_BUDGET") {
        match v.parse::<usize>() {
            Ok(cap) => cfg.element_cap = cap,
            Err(_) => return usage_error("H1_BUDGET must be an integer"),
        }
    } else {
        cfg.element_cap = DEFAULT_ELEMENT_CAP;
    }
    let report = match h1_report(&cfg) {
        Ok(r) => r,
        Err(e @ (H1Error::OrderMismatch { .. } | H1Error::BudgetExceeded { .. })) => {
            return check_failed(&e.to_string());
        }
        Err(e) => return usage_error(&e.to_string()),
    };
    let json = serde_json::to_string_pretty(&report).unwrap();
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            return usage_error(&format!("cannot write {path}: {e}"));
        }
    }
    if args.json {
        println!("{json}");
    } else {
        println!(
            "SL({}, F_{}) via {} generators: |G| = {}, dim Z1 = {}, dim B1 = {}, dim H1 = {} (over F_p), {} ms",
            report.n,
            report.q,
            report.generators,
            report.group_order,
            report.dim_z1,
            report.dim_b1,
            report.dim_h1,
            report.elapsed_ms
        );
    }
    ExitCode::from(EXIT_OK)
}

fn parse_probes(desc: &FieldDescriptor, s: &str) -> Result<Vec<FieldValue>, String> {
    let sep = if s.contains(';') { ';' } else { ',' };
    let mut out = Vec::new();
    for part in s.split(sep) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v = FieldValue::parse(desc, part).map_err(|e| format!("bad probe `{part}`: {e}"))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err("no probes given".into());
    }
    Ok(out)
}

#[derive(Serialize)]
struct VerifyOut {
    checked: usize,
    violations: Vec<String>,
    passed: bool,
}

#[derive(Serialize)]
struct RecognizeOut {
    decision: String,
    witness: Option<String>,
}

#[derive(Serialize)]
struct ExtractOut {
    witness: String,
    values: Vec<[String; 2]>,
    additive_checked: usize,
    leibniz_checked: usize,
    consistent: bool,
}

fn cmd_derivation(args: DerivationArgs) -> ExitCode {
    if args.n < 3 {
        return usage_error("n must be at least 3");
    }
    let desc = match parse_field(&args.field) {
        Ok(d) => d,
        Err(e) => return usage_error(&e),
    };
    let derivation = match args.d {
        DerivationKindArg::Zero => DerivationSpec::zero(&desc),
        DerivationKindArg::Ddx => match DerivationSpec::ddx(FieldValue::one(&desc)) {
            Ok(d) => d,
            Err(e) => return usage_error(&e.to_string()),
        },
    };
    let mut probes = match parse_probes(&desc, &args.probes) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let one = FieldValue::one(&desc);
    if !probes.contains(&one) {
        probes.insert(0, one.clone());
    }
    let gens = elementary_symbols(args.n, &probes);
    let spec = match derivation_cocycle(&derivation, args.n, &gens) {
        Ok(s) => s,
        Err(e) => return usage_error(&e.to_string()),
    };
    let f = EvaluatedCochain::new(spec);

    match args.action {
        ActionArg::Emit => {
            let text = f.spec().to_spec_file();
            match &args.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        return usage_error(&format!("cannot write {path}: {e}"));
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(EXIT_OK)
        }
        ActionArg::Verify => {
            let report = match verify_cocycle(
                &f,
                &VerifyTrials::Sampled {
                    seed: args.seed,
                    count: args.samples,
                    element_words: None,
                },
            ) {
                Ok(r) => r,
                Err(e) => return usage_error(&e.to_string()),
            };
            let out = VerifyOut {
                checked: report.checked,
                violations: report.violations.iter().map(|v| v.to_string()).collect(),
                passed: report.passed(),
            };
            if args.json {
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!(
                    "cocycle verification: {} checks, {} violations",
                    out.checked,
                    out.violations.len()
                );
                for v in &out.violations {
                    println!("  violated: {v}");
                }
            }
            if out.passed {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        ActionArg::Recognize => {
            let decision = match recognize_coboundary(&f) {
                Ok(d) => d,
                Err(e) => return usage_error(&e.to_string()),
            };
            report_recognition(&decision, args.expect, args.json)
        }
        ActionArg::Extract => {
            let (canon, witness) = match canonicalize_cocycle(&f) {
                Ok(c) => c,
                Err(e) => return check_failed(&e.to_string()),
            };
            let extract = match extract_derivation(&canon, &probes) {
                Ok(x) => x,
                Err(e) => return check_failed(&e.to_string()),
            };
            let out = ExtractOut {
                witness: witness.class.rep().to_string(),
                values: extract
                    .values
                    .iter()
                    .map(|(t, a)| [t.to_string(), a.to_string()])
                    .collect(),
                additive_checked: extract.additive_checked,
                leibniz_checked: extract.leibniz_checked,
                consistent: extract.consistent(),
            };
            if args.json {
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("subtracted coboundary witness: {}", out.witness);
                for [t, a] in &out.values {
                    println!("alpha({t}) = {a}");
                }
                println!(
                    "additivity checks: {}, product-rule checks: {}, consistent: {}",
                    out.additive_checked, out.leibniz_checked, out.consistent
                );
            }
            if out.consistent {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
    }
}

fn report_recognition(
    decision: &CoboundaryDecision,
    expect: Option<ExpectArg>,
    json: bool,
) -> ExitCode {
    let out = match decision {
        CoboundaryDecision::Coboundary(w) => RecognizeOut {
            decision: "coboundary".into(),
            witness: Some(w.class.rep().to_string()),
        },
        CoboundaryDecision::NotACoboundary => RecognizeOut {
            decision: "not-coboundary".into(),
            witness: None,
        },
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        match &out.witness {
            Some(w) => println!("coboundary with witness {w}"),
            None => println!("not a coboundary"),
        }
    }
    let ok = match expect {
        None => true,
        Some(ExpectArg::Coboundary) => out.decision == "coboundary",
        Some(ExpectArg::NotCoboundary) => out.decision == "not-coboundary",
    };
    if ok {
        ExitCode::from(EXIT_OK)
    } else {
        check_failed("recognition result does not match --expect")
    }
}

fn cmd_recognize(args: RecognizeArgs) -> ExitCode {
    let desc = match &args.field {
        Some(s) => match parse_field(s) {
            Ok(d) => Some(d),
            Err(e) => return usage_error(&e),
        },
        None => None,
    };
    let text = match std::fs::read_to_string(&args.spec) {
        Ok(t) => t,
        Err(e) => return usage_error(&format!("cannot read {}: {e}", args.spec)),
    };
    let spec = match CocycleSpec::parse_spec_file(&text, desc, args.n) {
        Ok(s) => s,
        Err(e) => return usage_error(&format!("cannot parse {}: {e}", args.spec)),
    };
    let f = EvaluatedCochain::new(spec);
    let decision = match recognize_coboundary(&f) {
        Ok(d) => d,
        Err(e) => return usage_error(&e.to_string()),
    };
    // round-trip sanity when a witness is produced
    if let CoboundaryDecision::Coboundary(w) = &decision {
        let back = coboundary(&w.class, f.spec().generators()).expect("witness reproduces input");
        debug_assert_eq!(&back, f.spec());
    }
    report_recognition(&decision, None, args.json)
}
