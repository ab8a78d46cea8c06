//! On-disk result cache keyed by input hash.
//!
//! Each entry is a JSON file holding the tool version, a SHA-256 checksum of
//! the payload text and the payload itself. Entries that fail to parse, carry
//! another version or do not match their checksum are deleted on read.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "CHOWALG_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".chowalg-cache";

pub fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        // length prefix keeps ("ab", "c") and ("a", "bc") apart
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>, version: &str) -> Self {
        Cache { dir: dir.into(), version: version.to_string() }
    }

    /// Directory from `CHOWALG_CACHE_DIR`, else `./.chowalg-cache`.
    pub fn from_env(version: &str) -> Self {
        let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Cache::new(dir, version)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<Value> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        match self.decode(&text) {
            Some(v) => Some(v),
            None => {
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    fn decode(&self, text: &str) -> Option<Value> {
        let entry: Value = serde_json::from_str(text).ok()?;
        if entry.get("version")?.as_str()? != self.version {
            return None;
        }
        let payload = entry.get("payload")?.as_str()?;
        if entry.get("checksum")?.as_str()? != sha256_hex(&[payload.as_bytes()]) {
            return None;
        }
        serde_json::from_str(payload).ok()
    }

    /// Writes through a temporary file so readers never see half an entry.
    pub fn store(&self, key: &str, payload: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let text = payload.to_string();
        let entry = json!({
            "version": self.version,
            "checksum": sha256_hex(&[text.as_bytes()]),
            "payload": text,
        });
        let tmp = self.dir.join(format!("{key}.tmp"));
        fs::write(&tmp, entry.to_string())?;
        fs::rename(tmp, self.path(key))
    }
}
