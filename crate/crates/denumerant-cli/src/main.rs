//! `denumerant`: exact restricted partition function computations from the
//! command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 singular system / nothing found /
//! uncovered period, 3 verification failure.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use denumerant::alpha::{self, AlphaError, AlphaSequence, SearchOutcome};
use denumerant::barnes::PartitionInstance;
use denumerant::exact::{is_prime, padic_val};
use denumerant::linsys::{self, LinsysError};
use denumerant::oracle;
use denumerant_cli::output::QuasiPolyDoc;
use denumerant_cli::suites;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "denumerant",
    version,
    about = "Exact quasi-polynomials for restricted partition functions",
    long_about = "Computes the restricted partition function p_a(n) exactly, as a \
quasi-polynomial with period D, by solving a linear system of scaled Bernoulli \
polynomial values against Bernoulli-Barnes numbers. Every result can be certified \
against a brute-force count. All output is exact: rationals print as num/den."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full coefficient table d[m][v] for a part vector
    Compute(ComputeArgs),
    /// Evaluate p_a(n) at a single point
    Eval(EvalArgs),
    /// Evaluate the determinant family for (r, D, alpha)
    Delta(DeltaArgs),
    /// Run an exact verification suite (exit 3 on any failure)
    Verify(VerifyArgs),
    /// Search composite periods for usable exponent sequences and log them
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct ComputeArgs {
    /// Parts a_1,...,a_r
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u64>,
    /// Period D (any common multiple of the parts); defaults to lcm(a)
    #[arg(long)]
    d: Option<u64>,
    /// Explicit exponent sequence alpha_1,...,alpha_{rD}
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<u64>>,
    /// Search for a sequence when no construction covers the period
    #[arg(long)]
    search: bool,
    /// Candidate budget for the search
    #[arg(long, default_value_t = 500)]
    budget: u64,
    /// Certify the result against brute-force counts up to this n
    #[arg(long, default_value_t = 200)]
    n_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Parts a_1,...,a_r
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u64>,
    /// Evaluation point
    #[arg(long)]
    n: u64,
    /// Period D; defaults to lcm(a)
    #[arg(long)]
    d: Option<u64>,
    /// Explicit exponent sequence
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<u64>>,
    /// Candidate budget when a composite period forces a search
    #[arg(long, default_value_t = 500)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DeltaKind {
    /// The full rD x rD determinant
    Full,
    /// The reduced r(D-1) determinant over scaled values
    Tilde,
    /// The odd/even parity block determinants (D >= 3)
    Split,
    /// Everything applicable
    All,
}

#[derive(Args)]
struct DeltaArgs {
    /// Number of parts r
    #[arg(long)]
    r: usize,
    /// Period D
    #[arg(long)]
    d: u64,
    /// Explicit exponent sequence; defaults to the construction for D
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<u64>>,
    /// Search for a sequence at composite periods
    #[arg(long)]
    search: bool,
    #[arg(long, default_value_t = 500)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = DeltaKind::Full)]
    kind: DeltaKind,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: lemmas, valuations, staudt, or props
    #[arg(long)]
    suite: String,
    /// Suite-specific index bound (defaults: lemmas 40, staudt/valuations 60)
    #[arg(long)]
    max: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Number of parts r
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// First period to try
    #[arg(long, default_value_t = 4)]
    d_min: u64,
    /// Last period to try (defaults to d-min)
    #[arg(long)]
    d_max: Option<u64>,
    /// Candidate budget per period
    #[arg(long, default_value_t = 500)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure that already knows its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Delta(args) => cmd_delta(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{payload}");
            std::io::stdout().flush().ok();
            Ok(())
        }
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
    }
}

fn make_instance(a: &[u64], d: Option<u64>) -> Result<PartitionInstance, Failure> {
    let result = match d {
        None => PartitionInstance::new(a.to_vec()),
        Some(period) => PartitionInstance::with_period(a.to_vec(), period),
    };
    result.map_err(|e| Failure::usage(e.to_string()))
}

/// Resolve the exponent sequence: explicit beats constructed; composite
/// periods fall back to the search when allowed.
fn resolve_alpha(
    r: usize,
    d: u64,
    explicit: &Option<Vec<u64>>,
    allow_search: bool,
    budget: u64,
) -> Result<AlphaSequence, Failure> {
    if let Some(values) = explicit {
        return AlphaSequence::user(values.clone(), r, d).map_err(|violations| {
            let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            Failure::usage(format!("invalid --alpha: {}", list.join("; ")))
        });
    }
    match alpha::alpha_for(r, d) {
        Ok(seq) => Ok(seq),
        Err(AlphaError::CompositePeriod(period)) if allow_search => {
            eprintln!(
                "note: period D={period} is composite; searching (budget {budget}) since no \
construction covers it"
            );
            match alpha::search_alpha(r, d, budget) {
                SearchOutcome::Found(seq) => Ok(seq),
                SearchOutcome::NotFound { tried } => Err(Failure::not_found(format!(
                    "NOT_FOUND: no sequence with nonzero determinant among {tried} candidates \
for r={r}, D={d}"
                ))),
            }
        }
        Err(AlphaError::CompositePeriod(period)) => Err(Failure::not_found(format!(
            "period D={period} is composite; the constructions cover D = 1, D = 2 and prime D \
(for other periods pass --search or an explicit --alpha)"
        ))),
        Err(e) => Err(Failure::not_found(e.to_string())),
    }
}

fn map_linsys_error(e: LinsysError) -> Failure {
    match e {
        LinsysError::Singular { .. } => Failure::not_found(format!("SINGULAR: {e}")),
        other => Failure {
            code: 2,
            message: other.to_string(),
        },
    }
}

fn compute_doc(
    a: &[u64],
    d: Option<u64>,
    explicit: &Option<Vec<u64>>,
    allow_search: bool,
    budget: u64,
    n_max: u64,
) -> Result<QuasiPolyDoc, Failure> {
    let inst = make_instance(a, d)?;
    let seq = resolve_alpha(inst.r(), inst.period(), explicit, allow_search, budget)?;
    let det = linsys::delta(&seq).map_err(map_linsys_error)?;
    let qp = linsys::quasipoly_from_system(&inst, &seq).map_err(map_linsys_error)?;
    let report = oracle::certify(&inst, &qp, n_max);
    if !report.is_clean() {
        let first = &report.mismatches[0];
        return Err(Failure {
            code: 3,
            message: format!(
                "certification failed with {} mismatches, first at {first}",
                report.mismatches.len()
            ),
        });
    }
    Ok(QuasiPolyDoc::new(a, seq.values(), &det, &qp, n_max))
}

fn cmd_compute(args: ComputeArgs) -> Result<u8, Failure> {
    let doc = compute_doc(
        &args.a,
        args.d,
        &args.alpha,
        args.search,
        args.budget,
        args.n_max,
    )?;
    let payload = match args.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("serializable")
        ),
        Format::Csv => doc.to_csv(),
        Format::Text => doc.to_text(),
    };
    emit(&args.out, &payload)?;
    Ok(0)
}

#[derive(Serialize)]
struct EvalDoc {
    a: Vec<u64>,
    n: u64,
    value: String,
}

fn cmd_eval(args: EvalArgs) -> Result<u8, Failure> {
    let inst = make_instance(&args.a, args.d)?;
    // eval always falls back to the search for composite periods: the point
    // value is the goal, not the construction
    let seq = resolve_alpha(inst.r(), inst.period(), &args.alpha, true, args.budget)?;
    let qp = linsys::quasipoly_from_system(&inst, &seq).map_err(map_linsys_error)?;
    let value = qp.eval(args.n).map_err(map_linsys_error)?;
    let payload = match args.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&EvalDoc {
                a: args.a.clone(),
                n: args.n,
                value: value.to_string(),
            })
            .expect("serializable")
        ),
        Format::Csv => format!("n,value\n{},{}\n", args.n, value),
        Format::Text => format!("{value}\n"),
    };
    emit(&args.out, &payload)?;
    Ok(0)
}

#[derive(Serialize)]
struct DeltaDoc {
    r: usize,
    #[serde(rename = "D")]
    d: u64,
    alpha: Vec<u64>,
    values: BTreeMap<String, String>,
}

fn cmd_delta(args: DeltaArgs) -> Result<u8, Failure> {
    if args.r == 0 || args.d == 0 {
        return Err(Failure::usage("need r >= 1 and D >= 1"));
    }
    let seq = resolve_alpha(args.r, args.d, &args.alpha, args.search, args.budget)?;
    let mut values = BTreeMap::new();
    let want_full = matches!(args.kind, DeltaKind::Full | DeltaKind::All);
    let want_tilde = matches!(args.kind, DeltaKind::Tilde | DeltaKind::All);
    let want_split = matches!(args.kind, DeltaKind::Split | DeltaKind::All);
    if want_full {
        let det = linsys::delta(&seq).map_err(map_linsys_error)?;
        values.insert("delta".to_string(), det.to_string());
    }
    if want_tilde {
        match linsys::tilde_delta(&seq) {
            Ok(det) => {
                values.insert("tilde_delta".to_string(), det.to_string());
            }
            Err(e) if args.kind == DeltaKind::All => {
                eprintln!("note: reduced determinant unavailable: {e}");
            }
            Err(e) => return Err(map_linsys_error(e)),
        }
    }
    if want_split {
        match linsys::split_deltas(&seq) {
            Ok((dp, dpp)) => {
                values.insert("delta_odd_block".to_string(), dp.to_string());
                values.insert("delta_even_block".to_string(), dpp.to_string());
            }
            Err(e) if args.kind == DeltaKind::All => {
                eprintln!("note: split determinants unavailable: {e}");
            }
            Err(e) => return Err(map_linsys_error(e)),
        }
    }
    let doc = DeltaDoc {
        r: args.r,
        d: args.d,
        alpha: seq.values().to_vec(),
        values,
    };
    let payload = match args.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("serializable")
        ),
        Format::Csv => {
            let mut s = String::from("name,value\n");
            for (k, v) in &doc.values {
                s.push_str(&format!("{k},{v}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = format!("r = {}  D = {}  alpha = {:?}\n", doc.r, doc.d, doc.alpha);
            for (k, v) in &doc.values {
                s.push_str(&format!("{k} = {v}\n"));
            }
            s
        }
    };
    emit(&args.out, &payload)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let checks = suites::run_suite(&args.suite, args.max).ok_or_else(|| {
        Failure::usage(format!(
            "unknown suite {:?}; expected lemmas, valuations, staudt, or props",
            args.suite
        ))
    })?;
    let failures = checks.iter().filter(|c| !c.pass).count();
    let payload = match args.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&checks).expect("serializable")
        ),
        Format::Csv => {
            let mut s = String::from("name,pass,detail\n");
            for c in &checks {
                s.push_str(&format!("{},{},{:?}\n", c.name, c.pass, c.detail));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                s.push_str(&format!(
                    "{} {} - {}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            s.push_str(&format!(
                "{}: {} checks, {} failed\n",
                args.suite,
                checks.len(),
                failures
            ));
            s
        }
    };
    emit(&args.out, &payload)?;
    Ok(if failures == 0 { 0 } else { 3 })
}

#[derive(Serialize)]
struct ExperimentRow {
    r: usize,
    #[serde(rename = "D")]
    d: u64,
    alpha: Vec<u64>,
    delta: String,
    /// p-adic valuation of delta at each prime dividing D, as "p=v".
    valuations: Vec<String>,
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn cmd_experiment(args: ExperimentArgs) -> Result<u8, Failure> {
    if args.r == 0 || args.d_min < 2 {
        return Err(Failure::usage("need r >= 1 and d-min >= 2"));
    }
    let d_max = args.d_max.unwrap_or(args.d_min);
    let mut rows = Vec::new();
    for d in args.d_min..=d_max {
        if is_prime(d) || d < 4 {
            eprintln!("note: skipping D={d}: covered by a construction, not an open period");
            continue;
        }
        match alpha::search_alpha(args.r, d, args.budget) {
            SearchOutcome::Found(seq) => {
                let det = linsys::delta(&seq).map_err(map_linsys_error)?;
                let valuations = prime_divisors(d)
                    .into_iter()
                    .map(|p| format!("{p}={}", padic_val(&det, p).expect("prime divisor")))
                    .collect();
                rows.push(ExperimentRow {
                    r: args.r,
                    d,
                    alpha: seq.values().to_vec(),
                    delta: det.to_string(),
                    valuations,
                });
            }
            SearchOutcome::NotFound { tried } => {
                eprintln!("NOT_FOUND: r={} D={d} after {tried} candidates", args.r);
            }
        }
    }
    let payload = match args.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&rows).expect("serializable")
        ),
        Format::Csv => {
            let mut s = String::from("r,D,alpha,delta,valuations\n");
            for row in &rows {
                let alpha: Vec<String> = row.alpha.iter().map(|v| v.to_string()).collect();
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.r,
                    row.d,
                    alpha.join(";"),
                    row.delta,
                    row.valuations.join(";")
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for row in &rows {
                s.push_str(&format!(
                    "r={} D={} alpha={:?} delta={} valuations={:?}\n",
                    row.r, row.d, row.alpha, row.delta, row.valuations
                ));
            }
            s
        }
    };
    emit(&args.out, &payload)?;
    if rows.is_empty() {
        Err(Failure::not_found(
            "NOT_FOUND: no period in range yielded a nonzero determinant within budget",
        ))
    } else {
        Ok(0)
    }
}
