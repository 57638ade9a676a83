//! `fqsums` — verify Fermat-quotient congruences on partial harmonic sums,
//! evaluate individual sums and quotients, scan for vanishing sums at the
//! Wieferich primes, and search for Wieferich primes.
//!
//! Exit codes: 0 success, 1 verification failures found, 2 usage or
//! configuration error.

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand};
use fqsums_cli::report::{self, resolve_out_path, OutputFormat, Sink};
use fqsums_cli::runner::{self, VerifyOptions};
use fqsums_core::hsums::eval_naive_in;
use fqsums_core::identities::{Catalog, ExpansionLimits};
use fqsums_core::modmath::{is_prime, ModContext};
use fqsums_core::scanner;
use fqsums_core::{eval_sum, PrefixTables, SumSpec, SumVariant};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fqsums",
    version,
    about = "Congruences of Fermat quotients and partial harmonic sums mod p",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the whole identity catalog over a prime range.
    Verify {
        /// Lower end of the prime range.
        #[arg(long, default_value_t = 5)]
        min: u64,
        /// Upper end of the prime range (inclusive).
        #[arg(long)]
        max: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Window-denominator cap for the two window-rule families.
        #[arg(long, default_value_t = 46)]
        nmax: u32,
        /// Output format: json-lines, csv or human.
        #[arg(long, default_value = "human")]
        format: OutputFormat,
        /// Report file (defaults to stdout). Relative paths resolve under
        /// $FQSUMS_OUTPUT_DIR when set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Checkpoint file for resumable runs; requires --out.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Evaluate one sum (or quotient) at a prime.
    Eval {
        /// The prime modulus.
        #[arg(long)]
        p: u64,
        /// Context exponent e: values are reported mod p^e.
        #[arg(long, default_value_t = 1)]
        exp: u32,
        /// A sum expression: s(k,N), s*(k,N), s'(k,N) or s''(k,N).
        #[arg(long, conflicts_with = "quotient")]
        sum: Option<String>,
        /// One of: fermat, fib, lucas, bernoulli.
        #[arg(long)]
        quotient: Option<String>,
        /// Base for the Fermat quotient.
        #[arg(long, default_value_t = 2)]
        base: u64,
        /// Index for the Bernoulli number.
        #[arg(long)]
        index: Option<u32>,
        #[arg(long, default_value = "human")]
        format: OutputFormat,
    },
    /// Scan a prime for vanishing sums; with several primes, report the
    /// windows that vanish at every one of them.
    Scan {
        /// Prime, or comma-separated primes for a consistency scan.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        /// Largest window denominator N to scan.
        #[arg(long, default_value_t = 46)]
        nmax: u32,
        /// Comma-separated variants: s, sstar, sprime, sdprime (or "all").
        #[arg(long, default_value = "all")]
        variants: String,
        #[arg(long, default_value = "human")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for primes with base^(p-1) = 1 mod p^2.
    Wieferich {
        #[arg(long, default_value_t = 2)]
        min: u64,
        /// Upper end of the search range (inclusive).
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "human")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive audit: no window with fewer than three terms vanishes,
    /// apart from the structural centered windows.
    Audit {
        /// Audit every odd prime up to this bound, every N <= p.
        #[arg(long, default_value_t = 200)]
        pmax: u64,
        #[arg(long, default_value = "human")]
        format: OutputFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify {
            min,
            max,
            jobs,
            nmax,
            format,
            out,
            checkpoint,
        } => {
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let opts = VerifyOptions {
                min,
                max,
                jobs,
                limits: ExpansionLimits { n_max: nmax },
                format,
                out: out.map(|p| resolve_out_path(&p)),
                checkpoint: checkpoint.map(|p| resolve_out_path(&p)),
            };
            let summary = runner::run_verify(&opts)?;
            eprintln!("{}", summary.line());
            for failure in &summary.failures {
                eprintln!(
                    "FAIL p={} {} residual={}",
                    failure.p, failure.id, failure.residual
                );
            }
            Ok(if summary.fail > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Eval {
            p,
            exp,
            sum,
            quotient,
            base,
            index,
            format,
        } => {
            if !is_prime(p) {
                bail!("{p} is not prime");
            }
            match (sum, quotient) {
                (Some(expr), None) => eval_sum_command(p, exp, &expr, format),
                (None, Some(kind)) => eval_quotient_command(p, exp, &kind, base, index, format),
                _ => bail!("exactly one of --sum or --quotient is required"),
            }
        }
        Command::Scan {
            p,
            nmax,
            variants,
            format,
            out,
        } => {
            if nmax < 1 {
                bail!("--nmax must be at least 1");
            }
            for &prime in &p {
                if !is_prime(prime) {
                    bail!("{prime} is not prime");
                }
            }
            let variants = parse_variants(&variants)?;
            let out = out.map(|p| resolve_out_path(&p));
            if p.len() == 1 {
                scan_single(p[0], nmax, &variants, format, out.as_deref())
            } else {
                scan_consistent(&p, nmax, &variants, format, out.as_deref())
            }
        }
        Command::Wieferich {
            min,
            max,
            base,
            jobs,
            format,
            out,
        } => {
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let primes = runner::wieferich_range(min, max, base, jobs)?;
            let out = out.map(|p| resolve_out_path(&p));
            let mut sink = Sink::create(out.as_deref())?;
            if format == OutputFormat::Csv {
                sink.line(report::WIEFERICH_CSV_HEADER)?;
            }
            for &p in &primes {
                sink.line(&report::wieferich_line(p, base, format)?)?;
            }
            sink.flush()?;
            eprintln!(
                "{} Wieferich primes to base {base} in [{min}, {max}]",
                primes.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit { pmax, format } => {
            let audit = scanner::three_term_audit(pmax);
            let mut sink = Sink::create(None)?;
            if format == OutputFormat::Csv {
                sink.line(report::SCAN_CSV_HEADER)?;
            }
            for record in &audit.counterexamples {
                sink.line(&report::scan_record_line(record, format)?)?;
            }
            sink.flush()?;
            eprintln!(
                "audited {} windows over {} primes: {} counterexamples, {} structural zeros",
                audit.windows_checked,
                audit.primes_checked,
                audit.counterexamples.len(),
                audit.structural_zeros
            );
            Ok(if audit.counterexamples.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

#[derive(Serialize)]
struct SumEvalLine<'a> {
    p: u64,
    expr: String,
    exp: u32,
    value: u64,
    term_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<&'a str>,
}

fn eval_sum_command(p: u64, exp: u32, expr: &str, format: OutputFormat) -> Result<ExitCode> {
    let spec: SumSpec = expr
        .parse()
        .map_err(|e| anyhow!("cannot parse {expr:?}: {e}"))?;
    let ctx = ModContext::new(p, exp).map_err(|e| anyhow!("{e}"))?;
    let value = if exp == 1 {
        eval_sum(&spec, &PrefixTables::build(p)).value()
    } else {
        eval_naive_in(&spec, &ctx).value()
    };
    let term_count = spec.term_count(p);
    let catalog = Catalog::standard();
    let closed = catalog.closed_form_of(&spec);
    match format {
        OutputFormat::Human => {
            println!("{spec} {ctx} = {value}");
            println!("terms: {term_count}");
            if let Some(form) = &closed {
                println!("closed form: {form}");
            }
        }
        OutputFormat::JsonLines => {
            let line = serde_json::to_string(&SumEvalLine {
                p,
                expr: spec.to_string(),
                exp,
                value,
                term_count,
                closed_form: closed.as_deref(),
            })?;
            println!("{line}");
        }
        OutputFormat::Csv => {
            println!("p,expr,exp,value,term_count,closed_form");
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(vec![]);
            w.serialize((
                p,
                spec.to_string(),
                exp,
                value,
                term_count,
                closed.as_deref().unwrap_or(""),
            ))?;
            print!("{}", String::from_utf8(w.into_inner()?)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct QuotientEvalLine {
    p: u64,
    quotient: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<u32>,
    exp: u32,
    value: u64,
}

fn eval_quotient_command(
    p: u64,
    exp: u32,
    kind: &str,
    base: u64,
    index: Option<u32>,
    format: OutputFormat,
) -> Result<ExitCode> {
    use fqsums_core::quotients;
    let line = match kind {
        "fermat" => {
            let ctx = ModContext::new(p, exp).map_err(|e| anyhow!("{e}"))?;
            let value = quotients::fermat_quotient(base, &ctx).map_err(|e| anyhow!("{e}"))?;
            QuotientEvalLine {
                p,
                quotient: "fermat",
                base: Some(base),
                index: None,
                exp,
                value: value.value(),
            }
        }
        "fib" | "fibonacci" => {
            require_exp1(exp, kind)?;
            let value = quotients::fibonacci_quotient(p).map_err(|e| anyhow!("{e}"))?;
            QuotientEvalLine {
                p,
                quotient: "fibonacci",
                base: None,
                index: None,
                exp: 1,
                value: value.value(),
            }
        }
        "lucas" => {
            require_exp1(exp, kind)?;
            let value = quotients::lucas_expr(p).map_err(|e| anyhow!("{e}"))?;
            QuotientEvalLine {
                p,
                quotient: "lucas",
                base: None,
                index: None,
                exp: 1,
                value: value.value(),
            }
        }
        "bernoulli" => {
            require_exp1(exp, kind)?;
            let n = index.ok_or_else(|| anyhow!("--quotient bernoulli needs --index"))?;
            let value = quotients::bernoulli_mod(n, p).map_err(|e| anyhow!("{e}"))?;
            QuotientEvalLine {
                p,
                quotient: "bernoulli",
                base: None,
                index: Some(n),
                exp: 1,
                value: value.value(),
            }
        }
        other => bail!("unknown quotient {other:?}: expected fermat, fib, lucas or bernoulli"),
    };
    match format {
        OutputFormat::Human => {
            let what = match line.quotient {
                "fermat" => format!("q_{}({p})", line.base.unwrap_or(2)),
                "bernoulli" => format!("B_{} mod {p}", line.index.unwrap_or(0)),
                name => format!("{name} quotient at {p}"),
            };
            println!("{what} = {}", line.value);
        }
        OutputFormat::JsonLines => println!("{}", serde_json::to_string(&line)?),
        OutputFormat::Csv => {
            println!("p,quotient,base,index,exp,value");
            println!(
                "{},{},{},{},{},{}",
                line.p,
                line.quotient,
                line.base.map_or(String::new(), |b| b.to_string()),
                line.index.map_or(String::new(), |i| i.to_string()),
                line.exp,
                line.value
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn require_exp1(exp: u32, kind: &str) -> Result<()> {
    if exp != 1 {
        bail!("--quotient {kind} is a mod-p value; --exp must be 1");
    }
    Ok(())
}

fn parse_variants(spec: &str) -> Result<Vec<SumVariant>> {
    if spec == "all" {
        return Ok(SumVariant::ALL.to_vec());
    }
    let mut out = Vec::new();
    for token in spec.split(',') {
        let v = SumVariant::parse_token(token.trim()).ok_or_else(|| {
            anyhow!("unknown variant {token:?}: expected s, sstar, sprime, sdprime")
        })?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    // canonical order keeps scan output deterministic
    out.sort();
    Ok(out)
}

fn scan_single(
    p: u64,
    nmax: u32,
    variants: &[SumVariant],
    format: OutputFormat,
    out: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let records = scanner::scan_vanishing(p, nmax, variants);
    let mut sink = Sink::create(out)?;
    if format == OutputFormat::Csv {
        sink.line(report::SCAN_CSV_HEADER)?;
    }
    for record in &records {
        sink.line(&report::scan_record_line(record, format)?)?;
    }
    sink.flush()?;
    eprintln!(
        "p={p}: {} vanishing sums with N <= {nmax} across {} variants",
        records.len(),
        variants.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn scan_consistent(
    primes: &[u64],
    nmax: u32,
    variants: &[SumVariant],
    format: OutputFormat,
    out: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let pairs =
        scanner::consistent_vanishing(primes, nmax, variants).map_err(|e| anyhow!("{e}"))?;
    let mut sink = Sink::create(out)?;
    if format == OutputFormat::Csv {
        sink.line(report::PAIR_CSV_HEADER)?;
    }
    let mut sorted: Vec<_> = pairs.iter().collect();
    sorted.sort_by_key(|(v, k, n)| (*n, *k, *v));
    for &(variant, k, n) in sorted {
        sink.line(&report::pair_line(variant, k, n, format)?)?;
    }
    sink.flush()?;
    eprintln!(
        "{} windows vanish at every prime in {primes:?} with N <= {nmax}",
        pairs.len()
    );
    Ok(ExitCode::SUCCESS)
}
