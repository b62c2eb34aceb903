//! Command-line front end: existence checks, constructions, verification,
//! prime-range searches, direct-factor tests, and quasi-perfect queries.
//!
//! Exit codes: 0 decided, 2 invalid input, 3 undecided (oracle bound),
//! 4 internal consistency failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use splitter_sets::error::Error;
use splitter_sets::existence::{
    check_family_bounded, construct_perfect, Decision, Verdict, DEFAULT_ORACLE_BOUND,
};
use splitter_sets::num_core::{is_prime, GroupCtx};
use splitter_sets::quasiperfect::{lift_interval, no_quasi_b0k_km, QuasiConclusion};
use splitter_sets::set_factorization::{build_complement, direct_factor_test};
use splitter_sets::setfile::{read_set_file, write_set_file};
use splitter_sets::splitter_core::{
    classify, perfect_exists_bruteforce, verify_splitter, Classification, Interval, Kind,
};

#[derive(Parser)]
#[command(name = "splitter", about = "perfect splitter sets in cyclic groups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Optional key=value config file (overrides defaults, overridden by env).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct FamilyArgs {
    /// The prime modulus q.
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k1: u32,
    #[arg(long)]
    k2: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a perfect B[-k1,k2](q) set exists.
    Check {
        #[command(flatten)]
        family: FamilyArgs,
        /// Fall back to the brute-force oracle for singular intervals.
        #[arg(long)]
        allow_singular: bool,
    },
    /// Construct a perfect splitter set and write it to a file.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output path; a .json extension selects the structured form.
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify and classify a set read from a file.
    Verify {
        /// Set file (text or .json).
        #[arg(long)]
        set: PathBuf,
        /// Modulus (required for text files, cross-checked for JSON).
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
    },
    /// Check every admissible prime in a range, ascending.
    Search {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        /// Worker threads (default: rayon's choice).
        #[arg(long)]
        jobs: Option<usize>,
        /// Optional results file, one record per prime.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether a set is a direct factor of Z_modulus.
    FactorTest {
        #[arg(long)]
        modulus: u64,
        /// Comma-separated elements, e.g. 0,1,404,2,278.
        #[arg(long)]
        set: String,
        /// The prime p with |set| a power of p.
        #[arg(long)]
        p: u64,
        /// Write the complementer factor here when one exists.
        #[arg(long)]
        complement_out: Option<PathBuf>,
    },
    /// Quasi-perfect nonexistence checks.
    Quasi {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum)]
        family: QuasiFamily,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QuasiFamily {
    /// B[0,k](km) with k | m.
    ZeroK,
    /// B[-(k-1),k](m) via interval lifting.
    Shifted,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bound = match oracle_bound(cli.config.as_deref()) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Check {
            family,
            allow_singular,
        } => cmd_check(family, *allow_singular, bound, cli.format),
        Command::Construct { family, out } => cmd_construct(family, out, cli.format),
        Command::Verify {
            set,
            modulus,
            k1,
            k2,
        } => cmd_verify(set, *modulus, *k1, *k2, cli.format),
        Command::Search {
            min,
            max,
            k1,
            k2,
            jobs,
            out,
        } => cmd_search(*min, *max, *k1, *k2, *jobs, out.as_deref(), bound, cli.format),
        Command::FactorTest {
            modulus,
            set,
            p,
            complement_out,
        } => cmd_factor_test(*modulus, set, *p, complement_out.as_deref(), cli.format),
        Command::Quasi { k, m, family } => cmd_quasi(*k, *m, *family, cli.format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Undecided(_) | Error::OracleBoundExceeded { .. } => 3,
        Error::Internal(_) => 4,
        _ => 2,
    }
}

/// Default oracle bound, overridable by a config file and then by the
/// SPLITTER_ORACLE_BOUND environment variable.
fn oracle_bound(config: Option<&std::path::Path>) -> Result<u64, Error> {
    let mut bound = DEFAULT_ORACLE_BOUND;
    if let Some(path) = config {
        let body = std::fs::read_to_string(path)?;
        for line in body.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::PreconditionNotMet(format!("config line {line:?} is not key=value"))
            })?;
            match key.trim() {
                "oracle_bound" => {
                    bound = value.trim().parse().map_err(|_| {
                        Error::PreconditionNotMet(format!("bad oracle_bound {value:?}"))
                    })?
                }
                other => {
                    return Err(Error::PreconditionNotMet(format!(
                        "unknown config key {other:?}"
                    )))
                }
            }
        }
    }
    if let Ok(value) = std::env::var("SPLITTER_ORACLE_BOUND") {
        bound = value
            .parse()
            .map_err(|_| Error::PreconditionNotMet(format!("bad SPLITTER_ORACLE_BOUND {value:?}")))?;
    }
    Ok(bound)
}

fn family_verdict(q: u64, k1: u32, k2: u32, allow_singular: bool, bound: u64) -> Result<Verdict, Error> {
    if !is_prime(q) || q == 2 {
        return Err(Error::NotPrime(q));
    }
    let interval = Interval::new(k1, k2)?;
    let ctx = GroupCtx::new(q)?;
    match check_family_bounded(&ctx, interval, bound) {
        Err(Error::Singular { .. }) if allow_singular => {
            let witness = perfect_exists_bruteforce(q, interval, bound)?;
            let mut verdict = Verdict {
                decision: if witness.is_some() {
                    Decision::Exists
                } else {
                    Decision::NotExists
                },
                rule: "bruteforce".into(),
                certificate: vec![("bound".into(), bound.to_string())],
                construction: None,
            };
            verdict.construction = witness;
            Ok(verdict)
        }
        other => other,
    }
}

fn verdict_json(v: &Verdict) -> serde_json::Value {
    json!({
        "exists": match v.decision {
            Decision::Exists => json!(true),
            Decision::NotExists => json!(false),
            Decision::Undecided => serde_json::Value::Null,
        },
        "rule": v.rule,
        "certificate": v.certificate.iter()
            .map(|(k, val)| json!({"name": k, "value": val}))
            .collect::<Vec<_>>(),
    })
}

fn family_name(q: u64, k1: u32, k2: u32) -> String {
    if k1 == 0 {
        format!("B[0,{k2}]({q})")
    } else {
        format!("B[-{k1},{k2}]({q})")
    }
}

fn print_verdict_text(q: u64, k1: u32, k2: u32, v: &Verdict) {
    let outcome = match v.decision {
        Decision::Exists => "exists",
        Decision::NotExists => "not-exists",
        Decision::Undecided => "undecided",
    };
    println!("{}: {outcome} [{}]", family_name(q, k1, k2), v.rule);
    for (key, value) in &v.certificate {
        println!("  {key} = {value}");
    }
}

fn cmd_check(family: &FamilyArgs, allow_singular: bool, bound: u64, format: Format) -> Result<(), Error> {
    let v = family_verdict(family.q, family.k1, family.k2, allow_singular, bound)?;
    match format {
        Format::Text => print_verdict_text(family.q, family.k1, family.k2, &v),
        Format::Json => {
            let record = json!({
                "command": "check",
                "inputs": {"q": family.q, "k1": family.k1, "k2": family.k2},
                "verdict": verdict_json(&v),
            });
            println!("{}", serde_json::to_string_pretty(&record)?);
        }
    }
    if v.decision == Decision::Undecided {
        return Err(Error::Undecided(format!(
            "{} beyond the oracle bound",
            family_name(family.q, family.k1, family.k2)
        )));
    }
    Ok(())
}

fn cmd_construct(family: &FamilyArgs, out: &std::path::Path, format: Format) -> Result<(), Error> {
    if !is_prime(family.q) || family.q == 2 {
        return Err(Error::NotPrime(family.q));
    }
    let interval = Interval::new(family.k1, family.k2)?;
    let ctx = GroupCtx::new(family.q)?;
    let set = construct_perfect(&ctx, interval)?;
    let comments = vec![format!(
        "perfect {} set, {} elements, generator {}",
        family_name(family.q, family.k1, family.k2),
        set.elements.len(),
        ctx.g()
    )];
    write_set_file(out, &set, &comments)?;
    match format {
        Format::Text => println!(
            "wrote perfect {} set with {} elements to {}",
            family_name(family.q, family.k1, family.k2),
            set.elements.len(),
            out.display()
        ),
        Format::Json => {
            let record = json!({
                "command": "construct",
                "inputs": {"q": family.q, "k1": family.k1, "k2": family.k2},
                "elements": set.elements.len(),
                "out": out.display().to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&record)?);
        }
    }
    Ok(())
}

fn cmd_verify(
    path: &std::path::Path,
    modulus: u64,
    k1: u32,
    k2: u32,
    format: Format,
) -> Result<(), Error> {
    let interval = Interval::new(k1, k2)?;
    let set = read_set_file(path, modulus, interval)?;
    let singular = classify(modulus, interval) == Classification::Singular;
    let kind = match verify_splitter(&set) {
        Ok(Kind::Perfect) => "perfect",
        Ok(Kind::QuasiPerfect) => "quasi-perfect",
        Ok(Kind::Partial) => "valid-not-maximal",
        Err(Error::NotAFactorization(_)) => "invalid",
        Err(e) => return Err(e),
    };
    match format {
        Format::Text => {
            println!(
                "{}, {} elements: {kind}{}",
                family_name(modulus, k1, k2),
                set.elements.len(),
                if singular { " (singular interval)" } else { "" }
            );
        }
        Format::Json => {
            let record = json!({
                "command": "verify",
                "inputs": {"modulus": modulus, "k1": k1, "k2": k2, "set": path.display().to_string()},
                "kind": kind,
                "singular": singular,
                "elements": set.elements.len(),
            });
            println!("{}", serde_json::to_string_pretty(&record)?);
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    min: u64,
    max: u64,
    k1: u32,
    k2: u32,
    jobs: Option<usize>,
    out: Option<&std::path::Path>,
    bound: u64,
    format: Format,
) -> Result<(), Error> {
    if min > max {
        return Err(Error::PreconditionNotMet(format!(
            "empty range [{min}, {max}]"
        )));
    }
    let interval = Interval::new(k1, k2)?;
    let span = interval.span() as u64;
    let candidates: Vec<u64> = (min.max(3)..=max)
        .filter(|&q| {
            q % 2 == 1
                && (q - 1) % span == 0
                && classify(q, interval) == Classification::Nonsingular
                && is_prime(q)
        })
        .collect();
    let run = || -> Vec<(u64, Result<Verdict, Error>)> {
        candidates
            .par_iter()
            .map(|&q| {
                let verdict = GroupCtx::new(q)
                    .and_then(|ctx| check_family_bounded(&ctx, interval, bound));
                (q, verdict)
            })
            .collect()
    };
    let mut results = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(run),
        None => run(),
    };
    results.sort_by_key(|(q, _)| *q);

    let mut records = Vec::new();
    for (q, verdict) in results {
        let v = verdict?;
        match format {
            Format::Text => {
                let outcome = match v.decision {
                    Decision::Exists => "exists",
                    Decision::NotExists => "not-exists",
                    Decision::Undecided => "undecided",
                };
                println!("{q} {outcome} [{}]", v.rule);
            }
            Format::Json => {
                let record = json!({"q": q, "verdict": verdict_json(&v)});
                println!("{}", serde_json::to_string(&record)?);
            }
        }
        records.push(json!({"q": q, "verdict": verdict_json(&v)}));
    }
    if let Some(path) = out {
        let body = records
            .iter()
            .map(|r| serde_json::to_string(r))
            .collect::<Result<Vec<_>, _>>()?
            .join("\n");
        std::fs::write(path, body + "\n")?;
    }
    Ok(())
}

fn cmd_factor_test(
    modulus: u64,
    set: &str,
    p: u64,
    complement_out: Option<&std::path::Path>,
    format: Format,
) -> Result<(), Error> {
    let elements: Vec<u64> = set
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::MalformedSetFile(format!("bad element {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let verdict = direct_factor_test(&elements, modulus, p)?;
    let complement = match &verdict.labeling {
        Some(label) => Some(build_complement(label, modulus)?),
        None => None,
    };
    if let (Some(path), Some(c)) = (complement_out, &complement) {
        let mut body = String::new();
        for &e in &c.elements {
            body.push_str(&e.to_string());
            body.push('\n');
        }
        std::fs::write(path, body)?;
    }
    match format {
        Format::Text => {
            if verdict.is_factor {
                println!(
                    "{{{set}}} is a direct factor of Z_{modulus} (levels {:?})",
                    verdict.levels
                );
                if let Some(c) = &complement {
                    println!("complement size {}", c.elements.len());
                }
            } else {
                println!(
                    "{{{set}}} is not a direct factor of Z_{modulus} (levels {:?})",
                    verdict.levels
                );
            }
        }
        Format::Json => {
            let record = json!({
                "command": "factor-test",
                "inputs": {"modulus": modulus, "set": elements, "p": p},
                "is_factor": verdict.is_factor,
                "levels": verdict.levels,
                "complement_size": complement.as_ref().map(|c| c.elements.len()),
            });
            println!("{}", serde_json::to_string_pretty(&record)?);
        }
    }
    Ok(())
}

fn cmd_quasi(k: u64, m: u64, family: QuasiFamily, format: Format) -> Result<(), Error> {
    let verdict = match family {
        QuasiFamily::ZeroK => no_quasi_b0k_km(k, m),
        QuasiFamily::Shifted => lift_interval(k, m),
    };
    let conclusion = match verdict.conclusion {
        QuasiConclusion::Nonexistent => "nonexistent",
        QuasiConclusion::NoConclusion => "no-conclusion",
    };
    match format {
        Format::Text => {
            println!(
                "applicable: {}; conclusion: {conclusion}",
                verdict.applicable
            );
            println!("  {}", verdict.reason);
        }
        Format::Json => {
            let record = json!({
                "command": "quasi",
                "inputs": {"k": k, "m": m},
                "applicable": verdict.applicable,
                "conclusion": conclusion,
                "reason": verdict.reason,
            });
            println!("{}", serde_json::to_string_pretty(&record)?);
        }
    }
    Ok(())
}
