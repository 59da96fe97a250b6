//! Moment-table cache: one versioned JSON document per (tau, tol, j_max),
//! written to a temporary file and atomically renamed so concurrent readers
//! never observe partial content. A checksum over the payload guards
//! against corruption; stale format versions and corrupt files are skipped
//! with a warning rather than trusted.

use crate::error::{Error, Result};
use crate::moments::MomentTable;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CacheDoc {
    format_version: u32,
    tau: f64,
    tol: f64,
    j_max: u32,
    #[serde(rename = "S")]
    s: Vec<(u32, f64, f64)>,
    #[serde(rename = "A")]
    a: Vec<(u32, f64, f64)>,
    #[serde(rename = "Jplus")]
    jplus: (f64, f64),
    #[serde(rename = "JminusLog")]
    jminus_log: (f64, f64),
    #[serde(rename = "I1")]
    i1: (f64, f64),
    #[serde(rename = "I2")]
    i2: (f64, f64),
    #[serde(rename = "I3")]
    i3: (f64, f64),
    checksum: String,
}

impl CacheDoc {
    fn from_table(table: &MomentTable) -> Self {
        let triple = |v: &[(f64, f64)]| {
            v.iter()
                .enumerate()
                .map(|(k, &(value, err))| (2 * k as u32, value, err))
                .collect()
        };
        let mut doc = Self {
            format_version: FORMAT_VERSION,
            tau: table.tau,
            tol: table.tol_used,
            j_max: table.j_max,
            s: triple(&table.s),
            a: triple(&table.a),
            jplus: table.jplus,
            jminus_log: table.jminus_log,
            i1: table.i1,
            i2: table.i2,
            i3: table.i3,
            checksum: String::new(),
        };
        doc.checksum = doc.compute_checksum();
        doc
    }

    /// Hex SHA-256 of the document serialized with an empty checksum field.
    fn compute_checksum(&self) -> String {
        let mut unsigned = self.clone();
        unsigned.checksum = String::new();
        let bytes = serde_json::to_vec(&unsigned).expect("cache serialization");
        let digest = Sha256::digest(&bytes);
        let mut hex = String::with_capacity(64);
        for b in digest {
            hex.push_str(&format!("{b:02x}"));
        }
        hex
    }

    fn into_table(self) -> MomentTable {
        let pairs = |v: Vec<(u32, f64, f64)>| v.into_iter().map(|(_, x, e)| (x, e)).collect();
        MomentTable {
            tau: self.tau,
            j_max: self.j_max,
            tol_used: self.tol,
            s: pairs(self.s),
            a: pairs(self.a),
            jplus: self.jplus,
            jminus_log: self.jminus_log,
            i1: self.i1,
            i2: self.i2,
            i3: self.i3,
        }
    }
}

/// Cache file name keyed by (tau rounded to 12 significant digits, tol, j_max).
pub fn cache_file_name(tau: f64, tol: f64, j_max: u32) -> String {
    format!("moments_tau{tau:.12e}_tol{tol:.3e}_jmax{j_max}.json")
}

/// Write the table to `dir` with the write-to-temp, atomic-rename protocol.
pub fn cache_store(table: &MomentTable, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Cache(format!("cannot create {}: {e}", dir.display())))?;
    let doc = CacheDoc::from_table(table);
    let bytes = serde_json::to_vec_pretty(&doc)
        .map_err(|e| Error::Cache(format!("serialization failed: {e}")))?;

    let final_path = dir.join(cache_file_name(table.tau, table.tol_used, table.j_max));
    let tmp_path = dir.join(format!(
        ".{}.tmp.{}",
        cache_file_name(table.tau, table.tol_used, table.j_max),
        std::process::id()
    ));
    std::fs::write(&tmp_path, &bytes)
        .map_err(|e| Error::Cache(format!("write {} failed: {e}", tmp_path.display())))?;
    std::fs::rename(&tmp_path, &final_path)
        .map_err(|e| Error::Cache(format!("rename to {} failed: {e}", final_path.display())))?;
    Ok(final_path)
}

/// Load a table if a valid cache entry exists. Missing files, stale format
/// versions and corrupt payloads all yield `None`; the latter two emit a
/// warning on stderr.
pub fn cache_load(tau: f64, tol: f64, j_max: u32, dir: &Path) -> Result<Option<MomentTable>> {
    let path = dir.join(cache_file_name(tau, tol, j_max));
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::Cache(format!("read {} failed: {e}", path.display()))),
    };
    let doc: CacheDoc = match serde_json::from_slice(&bytes) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("warning: ignoring unparseable cache file {}: {e}", path.display());
            return Ok(None);
        }
    };
    if doc.format_version != FORMAT_VERSION {
        eprintln!(
            "warning: ignoring cache file {} with format_version {} (expected {})",
            path.display(),
            doc.format_version,
            FORMAT_VERSION
        );
        return Ok(None);
    }
    if doc.compute_checksum() != doc.checksum {
        eprintln!("warning: checksum mismatch, ignoring cache file {}", path.display());
        return Ok(None);
    }
    Ok(Some(doc.into_table()))
}
