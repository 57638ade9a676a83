//! Parallel range drivers. Prime ranges are split into contiguous blocks;
//! blocks are processed in order with the primes inside each block handled
//! by an order-preserving parallel map, so the output stream is identical
//! for any worker count. The checkpoint advances per completed prime:
//! each prime's records are flushed before the checkpoint naming it is
//! written, which gives exactly-once semantics on resume.

use crate::checkpoint::{self, Checkpoint, FailureEntry};
use crate::report::{self, OutputFormat, Sink};
use anyhow::{bail, Context, Result};
use fqsums_core::identities::{verify_prime_with, Catalog, ExpansionLimits, Status};
use fqsums_core::modmath::primes_in;
use fqsums_core::scanner;
use rayon::prelude::*;
use std::path::{Path, PathBuf};

/// Primes per block: small enough for fine-grained checkpoints, large
/// enough to amortize thread handoff.
const BLOCK: usize = 32;

pub struct VerifyOptions {
    pub min: u64,
    pub max: u64,
    pub jobs: usize,
    pub limits: ExpansionLimits,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Summary {
    pub primes: u64,
    pub ok: u64,
    pub fail: u64,
    pub skipped: u64,
    pub failures: Vec<FailureEntry>,
}

impl Summary {
    pub fn line(&self) -> String {
        format!(
            "verified {} primes: ok {}, fail {}, skipped-empty {}",
            self.primes, self.ok, self.fail, self.skipped
        )
    }
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building worker pool")
}

/// Drop report lines for primes beyond the checkpoint (a crash window can
/// leave them) and recount the kept records, so the resumed report is
/// byte-identical to an uninterrupted run.
fn repair_report(
    path: &Path,
    format: OutputFormat,
    last_completed: u64,
    summary: &mut Summary,
) -> Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let body = std::fs::read_to_string(path)?;
    let mut kept = String::new();
    let mut seen_primes = std::collections::BTreeSet::new();
    for line in body.lines() {
        if format == OutputFormat::Csv && line == report::VERIFY_CSV_HEADER {
            kept.push_str(line);
            kept.push('\n');
            continue;
        }
        let p = match report::line_prime(line, format) {
            Some(p) => p,
            None => continue,
        };
        if p > last_completed {
            continue;
        }
        seen_primes.insert(p);
        match status_of(line, format) {
            Some("ok") => summary.ok += 1,
            Some("fail") => summary.fail += 1,
            Some("skipped-empty") => summary.skipped += 1,
            _ => {}
        }
        kept.push_str(line);
        kept.push('\n');
    }
    summary.primes += seen_primes.len() as u64;
    std::fs::write(path, kept)?;
    Ok(())
}

fn status_of(line: &str, format: OutputFormat) -> Option<&'static str> {
    let has = |needle: &str| line.contains(needle);
    match format {
        OutputFormat::JsonLines => {
            let v: serde_json::Value = serde_json::from_str(line).ok()?;
            match v.get("status")?.as_str()? {
                "ok" => Some("ok"),
                "fail" => Some("fail"),
                "skipped-empty" => Some("skipped-empty"),
                _ => None,
            }
        }
        // status is a dedicated field; the id alphabet cannot collide with
        // these tokens
        OutputFormat::Csv | OutputFormat::Human => {
            if has(",fail,") || has(" fail ") {
                Some("fail")
            } else if has(",skipped-empty,") || has(" skipped-empty ") {
                Some("skipped-empty")
            } else if has(",ok,") || has(" ok ") {
                Some("ok")
            } else {
                None
            }
        }
    }
}

/// Run the verifier over every prime in `[min, max]` (primes below 5 carry
/// no applicable identities and are skipped). Returns the summary; the
/// per-record report goes to `out` (or stdout).
pub fn run_verify(opts: &VerifyOptions) -> Result<Summary> {
    if opts.min > opts.max {
        bail!("--min {} exceeds --max {}", opts.min, opts.max);
    }
    if opts.checkpoint.is_some() && opts.out.is_none() {
        bail!("--checkpoint needs --out so the report can be resumed in place");
    }
    let catalog = Catalog::standard();
    let hash = checkpoint::hash_string(catalog.fingerprint());
    let mut summary = Summary::default();
    let mut start = opts.min;
    let mut failures: Vec<FailureEntry> = Vec::new();

    let resumed = match &opts.checkpoint {
        Some(cp_path) => match checkpoint::load(cp_path, &hash)? {
            Some(cp) => {
                start = cp.last_completed_prime + 1;
                failures = cp.failures.clone();
                let out = opts.out.as_ref().expect("checked above");
                repair_report(out, opts.format, cp.last_completed_prime, &mut summary)?;
                true
            }
            None => false,
        },
        None => false,
    };

    let mut sink = match (&opts.out, resumed) {
        (Some(path), true) => Sink::append(path)?,
        (Some(path), false) => Sink::create(Some(path))?,
        (None, _) => Sink::create(None)?,
    };
    if opts.format == OutputFormat::Csv && !resumed {
        sink.line(report::VERIFY_CSV_HEADER)?;
    }

    let primes = primes_in(start.max(5), opts.max);
    let pool = thread_pool(opts.jobs)?;
    for block in primes.chunks(BLOCK) {
        let records: Vec<Vec<_>> = pool.install(|| {
            block
                .par_iter()
                .map(|&p| verify_prime_with(&catalog, p, &opts.limits))
                .collect()
        });
        for (&prime, per_prime) in block.iter().zip(&records) {
            summary.primes += 1;
            for record in per_prime {
                match record.status {
                    Status::Ok => summary.ok += 1,
                    Status::Fail => {
                        summary.fail += 1;
                        failures.push(FailureEntry {
                            p: record.p,
                            id: record.id.clone(),
                            residual: record.residual,
                        });
                    }
                    Status::SkippedEmpty => summary.skipped += 1,
                }
                sink.line(&report::verify_record_line(record, opts.format)?)?;
            }
            if let Some(cp_path) = &opts.checkpoint {
                sink.flush()?;
                checkpoint::save(
                    cp_path,
                    &Checkpoint {
                        last_completed_prime: prime,
                        catalog_version_hash: hash.clone(),
                        failures: failures.clone(),
                    },
                )?;
            }
        }
        sink.flush()?;
    }
    sink.flush()?;
    summary.failures = failures;
    summary.fail = summary.failures.len() as u64;
    Ok(summary)
}

/// Wieferich search over `[lo, hi]` to the given base, parallel over range
/// blocks; the result is independent of the partitioning.
pub fn wieferich_range(lo: u64, hi: u64, base: u64, jobs: usize) -> Result<Vec<u64>> {
    if lo > hi {
        bail!("--min {lo} exceeds --max {hi}");
    }
    if base < 2 {
        bail!("--base must be at least 2");
    }
    const SPAN: u64 = 1 << 20;
    let mut blocks = Vec::new();
    let mut b_lo = lo;
    while b_lo <= hi {
        let b_hi = b_lo.saturating_add(SPAN - 1).min(hi);
        blocks.push((b_lo, b_hi));
        b_lo = b_hi + 1;
    }
    let pool = thread_pool(jobs)?;
    let found: Vec<Vec<u64>> = pool.install(|| {
        blocks
            .par_iter()
            .map(|&(a, b)| scanner::wieferich_scan(a, b, base))
            .collect()
    });
    Ok(found.into_iter().flatten().collect())
}
