//! Content-addressed store of count rows.
//!
//! An entry lives at `<dir>/<sha256(key)>.json` and holds the canonical key, the
//! row, and the SHA-256 of the row's JSON. A hit re-serializes the stored row,
//! so it is byte-identical to what the original computation wrote.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hyperlat::exactlat::{BallSpec, BasePoints, CountMethod};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::commands::CountRow;
use crate::CliError;

/// Everything that determines a count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub radius_sq: String,
    pub z: Option<Vec<Vec<f64>>>,
    pub w: Option<Vec<Vec<f64>>>,
    pub method: String,
    /// Only general base points depend on the tolerance.
    pub tol: Option<f64>,
}

pub fn cache_key(spec: &BallSpec, method: CountMethod, tol: f64) -> CacheKey {
    let (z, w, tol) = match spec.base() {
        BasePoints::Identity => (None, None, None),
        BasePoints::General { z, w } => (Some(z.rows()), Some(w.rows()), Some(tol)),
    };
    CacheKey {
        n: spec.n(),
        radius_sq: spec.radius_sq().to_string(),
        z,
        w,
        method: method.to_string(),
        tol,
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    row: CountRow,
    checksum: String,
}

fn sha_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn canonical(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("cache types serialize")
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", sha_hex(canonical(key).as_bytes())))
    }

    /// `Ok(None)` on a miss; an entry that fails to parse, carries another key,
    /// or whose checksum disagrees is an error.
    pub fn get(&self, key: &CacheKey) -> Result<Option<CountRow>, CliError> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(CliError::io(&path)(e)),
        };
        let corrupt = |reason: String| CliError::CacheCorrupt {
            path: path.clone(),
            reason,
        };
        let entry: Entry = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if &entry.key != key {
            return Err(corrupt("stored key does not match its file name".into()));
        }
        if sha_hex(canonical(&entry.row).as_bytes()) != entry.checksum {
            return Err(corrupt("checksum mismatch".into()));
        }
        Ok(Some(entry.row))
    }

    /// Writes through a temporary file and renames, so concurrent writers of the
    /// same key never leave a torn entry.
    pub fn put(&self, key: &CacheKey, row: &CountRow) -> Result<(), CliError> {
        let path = self.path_for(key);
        let entry = Entry {
            key: key.clone(),
            row: row.clone(),
            checksum: sha_hex(canonical(row).as_bytes()),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(CliError::io(&self.dir))?;
        tmp.write_all(canonical(&entry).as_bytes()).map_err(CliError::io(&path))?;
        tmp.persist(&path).map_err(|e| CliError::io(&path)(e.error))?;
        Ok(())
    }
}
