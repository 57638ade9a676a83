//! Output formats for verification records, vanishing-sum records, and the
//! other command results. One record per line; JSON-lines and CSV are the
//! machine formats, human is aligned text.

use anyhow::{bail, Context, Result};
use fqsums_core::identities::VerificationRecord;
use fqsums_core::scanner::VanishingRecord;
use fqsums_core::SumVariant;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    JsonLines,
    Csv,
    Human,
}

impl OutputFormat {
    pub fn is_machine(&self) -> bool {
        !matches!(self, OutputFormat::Human)
    }
}

impl FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "json-lines" | "jsonl" => Ok(OutputFormat::JsonLines),
            "csv" => Ok(OutputFormat::Csv),
            "human" => Ok(OutputFormat::Human),
            other => bail!("unknown format {other:?}: expected json-lines, csv or human"),
        }
    }
}

/// Resolve an output path against `FQSUMS_OUTPUT_DIR`: relative paths land
/// in that directory when the variable is set.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os("FQSUMS_OUTPUT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

#[derive(Serialize)]
struct VerifyLine<'a> {
    p: u64,
    id: &'a str,
    status: &'static str,
    residual: u64,
    term_counts: &'a [u64],
}

#[derive(Serialize)]
struct ScanLine {
    p: u64,
    variant: &'static str,
    k: u32,
    n: u32,
    term_count: u64,
    value: u64,
}

#[derive(Serialize)]
struct PairLine {
    variant: &'static str,
    k: u32,
    n: u32,
}

#[derive(Serialize)]
struct PrimeLine {
    p: u64,
    base: u64,
}

fn join_counts(counts: &[u64]) -> String {
    counts
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub const VERIFY_CSV_HEADER: &str = "p,id,status,residual,term_counts";
pub const SCAN_CSV_HEADER: &str = "p,variant,k,n,term_count,value";
pub const PAIR_CSV_HEADER: &str = "variant,k,n";
pub const WIEFERICH_CSV_HEADER: &str = "p,base";

fn csv_line<S: Serialize>(row: S) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.serialize(row)?;
    let bytes = w.into_inner().context("csv flush")?;
    Ok(String::from_utf8(bytes)?.trim_end().to_string())
}

/// Render one verification record in the given format (no trailing newline).
pub fn verify_record_line(record: &VerificationRecord, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::JsonLines => Ok(serde_json::to_string(&VerifyLine {
            p: record.p,
            id: &record.id,
            status: record.status.as_str(),
            residual: record.residual,
            term_counts: &record.term_counts,
        })?),
        OutputFormat::Csv => csv_line((
            record.p,
            record.id.as_str(),
            record.status.as_str(),
            record.residual,
            join_counts(&record.term_counts),
        )),
        OutputFormat::Human => Ok(format!(
            "p={:<8} {:<14} {:<13} residual={:<12} terms=[{}]",
            record.p,
            record.id,
            record.status.as_str(),
            record.residual,
            join_counts(&record.term_counts),
        )),
    }
}

pub fn scan_record_line(record: &VanishingRecord, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::JsonLines => Ok(serde_json::to_string(&ScanLine {
            p: record.p,
            variant: record.variant.symbol(),
            k: record.k,
            n: record.n,
            term_count: record.term_count,
            value: record.value,
        })?),
        OutputFormat::Csv => csv_line((
            record.p,
            record.variant.symbol(),
            record.k,
            record.n,
            record.term_count,
            record.value,
        )),
        OutputFormat::Human => Ok(format!(
            "p={:<8} {}({},{}) = 0  terms={}",
            record.p,
            record.variant.symbol(),
            record.k,
            record.n,
            record.term_count
        )),
    }
}

pub fn pair_line(variant: SumVariant, k: u32, n: u32, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::JsonLines => Ok(serde_json::to_string(&PairLine {
            variant: variant.symbol(),
            k,
            n,
        })?),
        OutputFormat::Csv => csv_line((variant.symbol(), k, n)),
        OutputFormat::Human => Ok(format!("{}({},{})", variant.symbol(), k, n)),
    }
}

pub fn wieferich_line(p: u64, base: u64, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::JsonLines => Ok(serde_json::to_string(&PrimeLine { p, base })?),
        OutputFormat::Csv => csv_line((p, base)),
        OutputFormat::Human => Ok(p.to_string()),
    }
}

/// Parse the prime a record line refers to; used to repair a partially
/// written report when resuming from a checkpoint.
pub fn line_prime(line: &str, format: OutputFormat) -> Option<u64> {
    match format {
        OutputFormat::JsonLines => serde_json::from_str::<serde_json::Value>(line)
            .ok()?
            .get("p")?
            .as_u64(),
        OutputFormat::Csv => line.split(',').next()?.parse().ok(),
        OutputFormat::Human => line
            .strip_prefix("p=")?
            .split_whitespace()
            .next()?
            .parse()
            .ok(),
    }
}

/// A line sink: either a file or stdout.
pub enum Sink {
    File(std::io::BufWriter<std::fs::File>),
    Stdout(std::io::Stdout),
}

impl Sink {
    pub fn create(path: Option<&Path>) -> Result<Sink> {
        match path {
            Some(p) => {
                let file = std::fs::File::create(p)
                    .with_context(|| format!("creating {}", p.display()))?;
                Ok(Sink::File(std::io::BufWriter::new(file)))
            }
            None => Ok(Sink::Stdout(std::io::stdout())),
        }
    }

    pub fn append(path: &Path) -> Result<Sink> {
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        Ok(Sink::File(std::io::BufWriter::new(file)))
    }

    pub fn line(&mut self, s: &str) -> Result<()> {
        match self {
            Sink::File(w) => writeln!(w, "{s}")?,
            Sink::Stdout(w) => writeln!(w, "{s}")?,
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        match self {
            Sink::File(w) => w.flush()?,
            Sink::Stdout(w) => w.flush()?,
        }
        Ok(())
    }
}
