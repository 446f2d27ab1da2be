//! `ulrich-forge`: enumeration, exponents, cohomology tables, single
//! constructions, Monte Carlo sweeps, and certificate re-verification for
//! Ulrich bundles on polarized Hirzebruch surfaces.
//!
//! Exit codes: 0 success / verdict true; 1 verdict false or verification
//! value mismatch; 2 invalid polarization; 3 pair not admissible;
//! 4 degenerate sampled map; 5 certificate schema mismatch.

mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ulrich_core::cohomology::{euler_char_line, line_bundle_cohomology};
use ulrich_core::forge::{certify, certify_counterexample, ConstructionKind, ForgeError};
use ulrich_core::fp::FieldPrime;
use ulrich_core::numerics::{
    coker_exponents, enumerate_admissible_c1, is_admissible_pair, ker_exponents, monad_exponents,
    special_c1, ulrich_chern_conditions,
};
use ulrich_core::picard::{Divisor, Polarization, SurfaceParams};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_ULRICH: u8 = 1;
pub const EXIT_BAD_POLARIZATION: u8 = 2;
pub const EXIT_NOT_ADMISSIBLE: u8 = 3;
pub const EXIT_DEGENERATE_MAP: u8 = 4;
pub const EXIT_SCHEMA_MISMATCH: u8 = 5;

pub const MASTER_SEED_ENV: &str = "ULRICH_FORGE_SEED";

#[derive(Parser)]
#[command(
    name = "ulrich-forge",
    version,
    about = "Ulrich bundles on Hirzebruch surfaces: enumerate, construct, certify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Kernel,
    Cokernel,
}

impl From<KindArg> for ConstructionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Kernel => ConstructionKind::Kernel,
            KindArg::Cokernel => ConstructionKind::Cokernel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindFilter {
    Both,
    Kernel,
    Cokernel,
}

#[derive(Subcommand)]
enum Command {
    /// List the admissible first Chern classes for a rank, with exponents.
    Pairs {
        #[arg(long)]
        e: u32,
        /// Polarization "a,b"
        #[arg(long)]
        h: String,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        json: bool,
    },
    /// Resolution and monad exponents for one candidate (r, c1).
    Exponents {
        #[arg(long)]
        e: u32,
        #[arg(long)]
        h: String,
        #[arg(long)]
        r: i64,
        /// First Chern class "alpha,beta"
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        /// Read divisors as (D.C0, D.f) instead of (alpha, beta)
        #[arg(long)]
        m2_convention: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exact cohomology of line bundles: a single divisor or a table.
    Cohomology {
        #[arg(long)]
        e: u32,
        /// Divisor "t,s"
        #[arg(long, conflicts_with_all = ["t_range", "s_range"], allow_hyphen_values = true)]
        d: Option<String>,
        /// Range "lo:hi" for the C0 coefficient
        #[arg(long, allow_hyphen_values = true)]
        t_range: Option<String>,
        /// Range "lo:hi" for the fiber coefficient
        #[arg(long, allow_hyphen_values = true)]
        s_range: Option<String>,
        /// Read the divisor as (D.C0, D.f) instead of (alpha, beta)
        #[arg(long)]
        m2_convention: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build one random candidate and write its certificate.
    Construct {
        #[arg(long, required_unless_present = "counterexample")]
        e: Option<u32>,
        #[arg(long, required_unless_present = "counterexample")]
        h: Option<String>,
        #[arg(long, required_unless_present = "counterexample")]
        r: Option<i64>,
        #[arg(
            long,
            required_unless_present = "counterexample",
            allow_hyphen_values = true
        )]
        c1: Option<String>,
        #[arg(long, value_enum, required_unless_present = "counterexample")]
        kind: Option<KindArg>,
        #[arg(long, default_value_t = 32003)]
        p: u64,
        /// Construction seed; defaults to ULRICH_FORGE_SEED or 0
        #[arg(long)]
        seed: Option<u64>,
        /// Certificate output path (JSON also goes to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        m2_convention: bool,
        /// Engineered split family "d=D,u=U" on (X0, O(d,d))
        #[arg(long)]
        counterexample: Option<String>,
    },
    /// Monte Carlo sweep over admissible classes; writes a CSV report.
    Sweep {
        #[arg(long)]
        e: u32,
        #[arg(long)]
        h: String,
        #[arg(long)]
        r: i64,
        /// Explicit classes "alpha,beta" (repeatable); default: enumerate
        #[arg(long, allow_hyphen_values = true)]
        c1: Vec<String>,
        #[arg(long, value_enum, default_value = "both")]
        kinds: KindFilter,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Master seed; defaults to ULRICH_FORGE_SEED or 0
        #[arg(long)]
        master_seed: Option<u64>,
        #[arg(long, default_value_t = 32003)]
        p: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute a stored certificate from its inputs and diff every field.
    Verify { certificate: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Pairs { e, h, r, json } => cmd_pairs(e, &h, r, json),
        Command::Exponents {
            e,
            h,
            r,
            c1,
            m2_convention,
            json,
        } => cmd_exponents(e, &h, r, &c1, m2_convention, json),
        Command::Cohomology {
            e,
            d,
            t_range,
            s_range,
            m2_convention,
            json,
        } => cmd_cohomology(
            e,
            d.as_deref(),
            t_range.as_deref(),
            s_range.as_deref(),
            m2_convention,
            json,
        ),
        Command::Construct {
            e,
            h,
            r,
            c1,
            kind,
            p,
            seed,
            out,
            m2_convention,
            counterexample,
        } => cmd_construct(ConstructArgs {
            e,
            h,
            r,
            c1,
            kind,
            p,
            seed,
            out,
            m2_convention,
            counterexample,
        }),
        Command::Sweep {
            e,
            h,
            r,
            c1,
            kinds,
            trials,
            jobs,
            master_seed,
            p,
            out,
        } => sweep::cmd_sweep(sweep::SweepArgs {
            e,
            h,
            r,
            c1,
            kinds: match kinds {
                KindFilter::Both => {
                    vec![ConstructionKind::Cokernel, ConstructionKind::Kernel]
                }
                KindFilter::Kernel => vec![ConstructionKind::Kernel],
                KindFilter::Cokernel => vec![ConstructionKind::Cokernel],
            },
            trials,
            jobs,
            master_seed,
            p,
            out,
        }),
        Command::Verify { certificate } => verify::cmd_verify(&certificate),
    }
}

/// Parse "x,y" into an integer pair.
pub fn parse_pair(text: &str, what: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!(
            "{what} must be written as two integers \"x,y\", got {text:?}"
        ));
    }
    let x = parts[0]
        .trim()
        .parse::<i64>()
        .map_err(|e| format!("{what}: {e}"))?;
    let y = parts[1]
        .trim()
        .parse::<i64>()
        .map_err(|e| format!("{what}: {e}"))?;
    Ok((x, y))
}

/// Divisor from CLI input. The canonical syntax is "alpha,beta"; under the
/// opt-in convention the input is read as (D.C0, D.f) and converted via
/// alpha = D.f, beta = D.C0 + e*D.f.
pub fn parse_divisor(text: &str, e: SurfaceParams, m2: bool) -> Result<Divisor, String> {
    let (x, y) = parse_pair(text, "divisor")?;
    if m2 {
        Ok(Divisor::new(y, x + e.e() * y))
    } else {
        Ok(Divisor::new(x, y))
    }
}

/// Polarization from "a,b", rejecting non-very-ample input with the exact
/// criterion in the message.
pub fn parse_polarization(text: &str, e: SurfaceParams) -> Result<Polarization, String> {
    let (a, b) = parse_pair(text, "polarization")?;
    if a <= 0 || b <= a * e.e() {
        return Err(format!(
            "polarization ({a},{b}) is not very ample on X_{}: need a > 0 and b > a*e",
            e.e()
        ));
    }
    Ok(Polarization::new(a, b))
}

pub fn fail(code: u8, message: &str) -> u8 {
    eprintln!("error: {message}");
    code
}

fn cmd_pairs(e: u32, h_text: &str, r: i64, json: bool) -> u8 {
    let e = SurfaceParams::new(e);
    let h = match parse_polarization(h_text, e) {
        Ok(h) => h,
        Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
    };
    let classes = enumerate_admissible_c1(e, h, r);
    let special = special_c1(e, h, r);
    if json {
        let rows: Vec<serde_json::Value> = classes
            .iter()
            .map(|&c1| {
                let ck = coker_exponents(e, h, r, c1);
                let kr = ker_exponents(e, h, r, c1);
                serde_json::json!({
                    "c1": c1,
                    "coker": ck,
                    "ker": kr,
                    "special": Some(c1) == special,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        return EXIT_OK;
    }
    println!(
        "admissible classes for e={}, h=({},{}), r={r}: {}",
        e.e(),
        h.a,
        h.b,
        classes.len()
    );
    if classes.is_empty() {
        return EXIT_OK;
    }
    println!(
        "{:>6} {:>6}  {:>16} {:>16}  {}",
        "alpha", "beta", "coker (g,d,t)", "ker (l,m,n)", "special"
    );
    for c1 in classes {
        let ck = coker_exponents(e, h, r, c1);
        let kr = ker_exponents(e, h, r, c1);
        println!(
            "{:>6} {:>6}  {:>16} {:>16}  {}",
            c1.alpha,
            c1.beta,
            format!("({},{},{})", ck.gamma, ck.delta, ck.tau),
            format!("({},{},{})", kr.lambda, kr.mu, kr.nu),
            if Some(c1) == special { "yes" } else { "" }
        );
    }
    EXIT_OK
}

fn cmd_exponents(e: u32, h_text: &str, r: i64, c1_text: &str, m2: bool, json: bool) -> u8 {
    let e = SurfaceParams::new(e);
    let h = match parse_polarization(h_text, e) {
        Ok(h) => h,
        Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
    };
    let c1 = match parse_divisor(c1_text, e, m2) {
        Ok(d) => d,
        Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
    };
    let ck = coker_exponents(e, h, r, c1);
    let kr = ker_exponents(e, h, r, c1);
    let monad = monad_exponents(e, h, r, c1).ok();
    let chern = ulrich_chern_conditions(e, h, r, c1);
    let admissible = is_admissible_pair(e, h, r, c1);
    if json {
        let value = serde_json::json!({
            "e": e.e(),
            "h": h,
            "r": r,
            "c1": c1,
            "admissible": admissible,
            "degree_ok": chern.as_ref().map(|c| c.degree_ok).ok(),
            "c2": chern.as_ref().map(|c| c.c2).ok(),
            "coker": ck,
            "ker": kr,
            "monad": monad,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
        return EXIT_OK;
    }
    println!(
        "candidate e={}, h=({},{}), r={r}, c1=({},{})",
        e.e(),
        h.a,
        h.b,
        c1.alpha,
        c1.beta
    );
    match chern {
        Ok(c) => println!(
            "degree condition: {}; c2 = {}",
            if c.degree_ok { "holds" } else { "fails" },
            c.c2
        ),
        Err(err) => println!("degree condition: {err}"),
    }
    println!("admissible: {admissible}");
    println!(
        "coker exponents (gamma, delta, tau) = ({}, {}, {})",
        ck.gamma, ck.delta, ck.tau
    );
    println!(
        "ker exponents (lambda, mu, nu)      = ({}, {}, {})",
        kr.lambda, kr.mu, kr.nu
    );
    match monad {
        Some(m) => println!(
            "monad exponents (eps, zeta, eta, theta) = ({}, {}, {}, {})",
            m.eps, m.zeta, m.eta, m.theta
        ),
        None => println!("monad exponents: undefined for a = 1"),
    }
    EXIT_OK
}

fn parse_range(text: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("range must be written \"lo:hi\", got {text:?}"));
    }
    let lo = parts[0].trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = parts[1].trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok((lo, hi))
}

fn cmd_cohomology(
    e: u32,
    d: Option<&str>,
    t_range: Option<&str>,
    s_range: Option<&str>,
    m2: bool,
    json: bool,
) -> u8 {
    let e = SurfaceParams::new(e);
    let divisors: Vec<Divisor> = if let Some(d_text) = d {
        match parse_divisor(d_text, e, m2) {
            Ok(d) => vec![d],
            Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
        }
    } else {
        let (Some(t_text), Some(s_text)) = (t_range, s_range) else {
            return fail(
                EXIT_BAD_POLARIZATION,
                "pass either --d t,s or both --t-range and --s-range",
            );
        };
        let (t_lo, t_hi) = match parse_range(t_text) {
            Ok(r) => r,
            Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
        };
        let (s_lo, s_hi) = match parse_range(s_text) {
            Ok(r) => r,
            Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
        };
        (t_lo..=t_hi)
            .flat_map(|t| (s_lo..=s_hi).map(move |s| Divisor::new(t, s)))
            .collect()
    };
    if json {
        let rows: Vec<serde_json::Value> = divisors
            .iter()
            .map(|&d| {
                let triple = line_bundle_cohomology(e, d);
                serde_json::json!({
                    "d": d,
                    "h0": triple.h0,
                    "h1": triple.h1,
                    "h2": triple.h2,
                    "chi": euler_char_line(e, d),
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        return EXIT_OK;
    }
    println!(
        "{:>5} {:>5} {:>8} {:>8} {:>8} {:>8}",
        "t", "s", "h0", "h1", "h2", "chi"
    );
    for d in divisors {
        let triple = line_bundle_cohomology(e, d);
        println!(
            "{:>5} {:>5} {:>8} {:>8} {:>8} {:>8}",
            d.alpha,
            d.beta,
            triple.h0,
            triple.h1,
            triple.h2,
            euler_char_line(e, d)
        );
    }
    EXIT_OK
}

struct ConstructArgs {
    e: Option<u32>,
    h: Option<String>,
    r: Option<i64>,
    c1: Option<String>,
    kind: Option<KindArg>,
    p: u64,
    seed: Option<u64>,
    out: Option<PathBuf>,
    m2_convention: bool,
    counterexample: Option<String>,
}

pub fn env_seed() -> Option<u64> {
    std::env::var(MASTER_SEED_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
}

fn parse_counterexample(text: &str) -> Result<(i64, i64), String> {
    let mut d = None;
    let mut u = None;
    for part in text.split(',') {
        let Some((key, value)) = part.split_once('=') else {
            return Err(format!(
                "counterexample spec must look like d=2,u=1, got {text:?}"
            ));
        };
        let value: i64 = value
            .trim()
            .parse()
            .map_err(|e| format!("counterexample: {e}"))?;
        match key.trim() {
            "d" => d = Some(value),
            "u" => u = Some(value),
            other => return Err(format!("unknown counterexample key {other:?}")),
        }
    }
    match (d, u) {
        (Some(d), Some(u)) => Ok((d, u)),
        _ => Err("counterexample spec needs both d and u".to_string()),
    }
}

fn cmd_construct(args: ConstructArgs) -> u8 {
    let field = match FieldPrime::new(args.p) {
        Ok(f) => f,
        Err(err) => return fail(EXIT_BAD_POLARIZATION, &err.to_string()),
    };
    let result = if let Some(spec) = args.counterexample.as_deref() {
        match parse_counterexample(spec) {
            Ok((d, u)) => certify_counterexample(d, u, field),
            Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
        }
    } else {
        let e = SurfaceParams::new(args.e.expect("clap enforces presence"));
        let h = match parse_polarization(args.h.as_deref().unwrap(), e) {
            Ok(h) => h,
            Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
        };
        let c1 = match parse_divisor(args.c1.as_deref().unwrap(), e, args.m2_convention) {
            Ok(d) => d,
            Err(msg) => return fail(EXIT_BAD_POLARIZATION, &msg),
        };
        let seed = args.seed.or_else(env_seed).unwrap_or(0);
        certify(
            e,
            h,
            args.r.unwrap(),
            c1,
            args.kind.unwrap().into(),
            field,
            seed,
        )
    };
    match result {
        Ok(cert) => {
            let json = serde_json::to_string_pretty(&cert).unwrap();
            println!("{json}");
            if let Some(path) = args.out {
                if let Err(err) = std::fs::write(&path, json + "\n") {
                    return fail(
                        EXIT_NOT_ULRICH,
                        &format!("writing {}: {err}", path.display()),
                    );
                }
            }
            if cert.verdict {
                EXIT_OK
            } else {
                eprintln!(
                    "not Ulrich: {} = {}",
                    cert.exact_check_name, cert.exact_check_value
                );
                EXIT_NOT_ULRICH
            }
        }
        Err(ForgeError::NotAdmissible) => fail(
            EXIT_NOT_ADMISSIBLE,
            "the pair (r, c1) is not an admissible Ulrich pair for this polarization",
        ),
        Err(ForgeError::DegenerateMap { probe }) => fail(
            EXIT_DEGENERATE_MAP,
            &format!(
                "sampled map degenerates at point {:?} after {} samples",
                probe.first_failure_point, probe.samples_tested
            ),
        ),
        Err(err) => fail(EXIT_BAD_POLARIZATION, &err.to_string()),
    }
}
