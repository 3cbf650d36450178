//! Content-addressed artifact cache with a single-writer lock.

use std::fs::{self, File};
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Directory override for the cache.
pub const CACHE_ENV: &str = "KRONECKER_CACHE_DIR";

pub struct Cache {
    dir: PathBuf,
}

/// Hash of the artifact kind, its configuration and the code version.
pub fn key(kind: &str, config: &serde_json::Value, version: &str) -> String {
    let mut h = Sha256::new();
    h.update(kind.as_bytes());
    h.update([0]);
    h.update(config.to_string().as_bytes());
    h.update([0]);
    h.update(version.as_bytes());
    hex::encode(h.finalize())
}

impl Cache {
    pub fn from_env() -> std::io::Result<Self> {
        let dir = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".kronecker-cache"));
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    fn path(&self, kind: &str, key: &str) -> PathBuf {
        self.dir.join(format!("{kind}-{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(kind, key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put<T: Serialize>(&self, kind: &str, key: &str, value: &T) -> std::io::Result<()> {
        let lock = File::create(self.dir.join("lock"))?;
        lock.lock()?;
        let tmp = self.dir.join(format!(".{kind}-{key}.tmp"));
        fs::write(&tmp, serde_json::to_vec_pretty(value)?)?;
        fs::rename(&tmp, self.path(kind, key))?;
        lock.unlock()
    }
}
