//! On-disk result cache keyed by command, k and configuration hash.
//!
//! Entries record the tool version and are re-validated by the caller on
//! load; anything stale or invalid is recomputed and overwritten. A lock file
//! marks the directory as owned by one invocation.

use std::fs::{self, File, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
const LOCK_NAME: &str = ".dilatation-lab.lock";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub command: String,
    pub k: usize,
    pub config_hash: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry<T> {
    pub key: CacheKey,
    pub tool_version: String,
    pub payload: T,
}

pub struct Cache {
    dir: PathBuf,
    lock: PathBuf,
    writes: Mutex<()>,
}

impl Cache {
    /// Take the directory's lock. `Ok(None)` when another invocation holds it.
    pub fn open(dir: &Path) -> std::io::Result<Option<Cache>> {
        fs::create_dir_all(dir)?;
        let lock = dir.join(LOCK_NAME);
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(mut f) => {
                writeln!(f, "{}", std::process::id())?;
                Ok(Some(Cache {
                    dir: dir.to_path_buf(),
                    lock,
                    writes: Mutex::new(()),
                }))
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir
            .join(format!("{}-k{}-{}.json", key.command, key.k, &key.config_hash[..16]))
    }

    /// The stored payload if the entry exists, parses, and matches both the key
    /// and this tool version.
    pub fn load<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry<T> = serde_json::from_str(&text).ok()?;
        (entry.key == *key && entry.tool_version == TOOL_VERSION).then_some(entry.payload)
    }

    /// Write through a temporary file so readers never see a partial entry.
    pub fn store<T: Serialize>(&self, key: &CacheKey, payload: &T) -> std::io::Result<()> {
        let entry = CacheEntry {
            key: key.clone(),
            tool_version: TOOL_VERSION.to_string(),
            payload,
        };
        let text = serde_json::to_string_pretty(&entry).map_err(std::io::Error::other)?;
        let _guard = self.writes.lock().unwrap_or_else(|e| e.into_inner());
        let path = self.path(key);
        let tmp = path.with_extension("json.tmp");
        let mut f = File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        fs::rename(tmp, path)
    }
}

impl Drop for Cache {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(k: usize) -> CacheKey {
        CacheKey {
            command: "certify".into(),
            k,
            config_hash: "0123456789abcdef0123".into(),
        }
    }

    #[test]
    fn round_trip_and_lock() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap().unwrap();
        assert!(Cache::open(dir.path()).unwrap().is_none());
        assert_eq!(cache.load::<Vec<u32>>(&key(3)), None);
        cache.store(&key(3), &vec![1u32, 2]).unwrap();
        assert_eq!(cache.load::<Vec<u32>>(&key(3)), Some(vec![1, 2]));
        assert_eq!(cache.load::<Vec<u32>>(&key(4)), None);
        drop(cache);
        assert!(Cache::open(dir.path()).unwrap().is_some());
    }

    #[test]
    fn other_versions_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap().unwrap();
        let stale = CacheEntry {
            key: key(2),
            tool_version: "0.0.0-old".into(),
            payload: 7u32,
        };
        fs::write(cache.path(&key(2)), serde_json::to_string(&stale).unwrap()).unwrap();
        assert_eq!(cache.load::<u32>(&key(2)), None);
    }
}
