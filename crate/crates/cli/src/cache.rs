//! On-disk cache of computed lemnatomic polynomials.
//!
//! One JSON file per modulus, `lemnatomic_<beta>.json`, written to a
//! temporary file and renamed into place. Entries that fail to parse, carry
//! another schema version, or fail re-validation are treated as misses.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use lemnatomic::lemnatomic::{LemnatomicRecord, Method};
use lemnatomic::GaussInt;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    #[serde(flatten)]
    pub record: LemnatomicRecord,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `beta` must already be in primary form.
    pub fn path(&self, beta: &GaussInt) -> PathBuf {
        self.dir.join(format!("lemnatomic_{beta}.json"))
    }

    /// A validated record for `beta` produced by a pipeline at least as
    /// strong as `method`.
    pub fn load(&self, beta: &GaussInt, method: Method) -> Option<LemnatomicRecord> {
        let text = fs::read_to_string(self.path(beta)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.schema_version != SCHEMA_VERSION || &entry.record.beta != beta {
            return None;
        }
        entry.record.validate().ok()?;
        let usable = entry.record.method == method || entry.record.method == Method::Both;
        usable.then_some(entry.record)
    }

    pub fn store(&self, record: &LemnatomicRecord) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry { schema_version: SCHEMA_VERSION, record: record.clone() };
        let text = serde_json::to_string_pretty(&entry).map_err(io::Error::other)?;
        let target = self.path(&record.beta);
        let tmp = self.dir.join(format!(".lemnatomic_{}.{}.tmp", record.beta, std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, &target).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lemnatomic::lemnatomic::compute_lemnatomic;
    use lemnatomic::Exec;

    fn record() -> LemnatomicRecord {
        compute_lemnatomic(&"-3".parse().unwrap(), Method::Exact, 256, Exec::Sequential).unwrap()
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let r = record();
        cache.store(&r).unwrap();
        assert_eq!(cache.load(&r.beta, Method::Exact), Some(r.clone()));
        // an exact entry does not satisfy a request for both pipelines
        assert_eq!(cache.load(&r.beta, Method::Both), None);
        assert!(cache.path(&r.beta).ends_with("lemnatomic_-3.json"));
    }

    #[test]
    fn corrupted_and_stale_entries_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let r = record();
        cache.store(&r).unwrap();
        let path = cache.path(&r.beta);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert_eq!(cache.load(&r.beta, Method::Exact), None);
        fs::write(&path, text.replace("\"schema_version\": 1", "\"schema_version\": 0")).unwrap();
        assert_eq!(cache.load(&r.beta, Method::Exact), None);
        let mut tampered: serde_json::Value = serde_json::from_str(&text).unwrap();
        tampered["coefficients"]["coeffs"][0] = "-2".into();
        fs::write(&path, tampered.to_string()).unwrap();
        assert_eq!(cache.load(&r.beta, Method::Exact), None);
    }
}
