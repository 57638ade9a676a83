//! Resumable checkpoint for range verification: a single JSON document
//! `{last_completed_prime, catalog_version_hash, failures: [...]}` written
//! atomically (write-temp-then-rename). Resuming from a checkpoint
//! reproduces exactly the report of an uninterrupted run.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FailureEntry {
    pub p: u64,
    pub id: String,
    pub residual: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Checkpoint {
    pub last_completed_prime: u64,
    /// Fingerprint of the catalog the run was started with, as
    /// `fnv1a:<hex>`; a mismatch means the report would be incoherent.
    pub catalog_version_hash: String,
    pub failures: Vec<FailureEntry>,
}

pub fn hash_string(fingerprint: u64) -> String {
    format!("fnv1a:{fingerprint:016x}")
}

pub fn save(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let body = serde_json::to_string_pretty(checkpoint)?;
    std::fs::write(&tmp, body).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

/// Load a checkpoint if the file exists, verifying the catalog hash.
pub fn load(path: &Path, expected_hash: &str) -> Result<Option<Checkpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let body =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let checkpoint: Checkpoint =
        serde_json::from_str(&body).with_context(|| format!("parsing {}", path.display()))?;
    if checkpoint.catalog_version_hash != expected_hash {
        bail!(
            "checkpoint {} was written with catalog {}, current is {}; \
             remove the checkpoint to start over",
            path.display(),
            checkpoint.catalog_version_hash,
            expected_hash
        );
    }
    Ok(Some(checkpoint))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_hash_guard() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let cp = Checkpoint {
            last_completed_prime: 97,
            catalog_version_hash: hash_string(42),
            failures: vec![FailureEntry {
                p: 13,
                id: "X1".into(),
                residual: 5,
            }],
        };
        save(&path, &cp).unwrap();
        assert_eq!(load(&path, &hash_string(42)).unwrap(), Some(cp));
        assert!(load(&path, &hash_string(43)).is_err());
        assert_eq!(load(&dir.path().join("nope.json"), "x").unwrap(), None);
    }
}
