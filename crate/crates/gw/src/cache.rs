//! On-disk memo table: the canonical JSON of every memoized series inside
//! an envelope carrying a format version and a SHA-256 checksum of the
//! entries.

use std::fs;
use std::path::{Path, PathBuf};

use cp1_core::toda::Engine;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{GwError, Result};
use crate::json::{KeyJson, SeriesJson};

pub const FORMAT_VERSION: u64 = 1;
pub const CACHE_ENV: &str = "GW_CP1_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: KeyJson,
    pub series: SeriesJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Envelope {
    format_version: u64,
    checksum: String,
    entries: Vec<CacheEntry>,
}

fn checksum(entries: &[CacheEntry]) -> String {
    let bytes = serde_json::to_vec(entries).expect("cache entries are always serializable");
    hex::encode(Sha256::digest(bytes))
}

/// The `--cache` flag if given, else `GW_CP1_CACHE`, else nothing.
pub fn resolve_path(flag: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.to_path_buf());
    }
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

pub fn entries(engine: &Engine) -> Vec<CacheEntry> {
    engine
        .memo()
        .iter()
        .map(|(k, s)| CacheEntry {
            key: k.into(),
            series: s.into(),
        })
        .collect()
}

/// Serialized cache file contents for the engine's memo table.
pub fn to_bytes(engine: &Engine) -> Vec<u8> {
    let entries = entries(engine);
    let envelope = Envelope {
        format_version: FORMAT_VERSION,
        checksum: checksum(&entries),
        entries,
    };
    let mut out = serde_json::to_vec(&envelope).expect("cache is always serializable");
    out.push(b'\n');
    out
}

/// Validates cache file contents and seeds `engine` with them.
pub fn load_bytes(engine: &mut Engine, bytes: &[u8]) -> Result<usize> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| GwError::CorruptCache(e.to_string()))?;
    let found = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| GwError::CorruptCache("missing format_version".into()))?;
    if found != FORMAT_VERSION {
        return Err(GwError::VersionMismatch {
            found,
            expected: FORMAT_VERSION,
        });
    }
    let envelope: Envelope =
        serde_json::from_value(value).map_err(|e| GwError::CorruptCache(e.to_string()))?;
    if checksum(&envelope.entries) != envelope.checksum {
        return Err(GwError::CorruptCache("checksum mismatch".into()));
    }
    let mut loaded = Vec::with_capacity(envelope.entries.len());
    for e in &envelope.entries {
        loaded.push(((&e.key).into(), e.series.to_series()?));
    }
    let count = loaded.len();
    for (k, s) in loaded {
        engine.insert_memo(k, s);
    }
    Ok(count)
}

/// Loads `path` into `engine`; a missing file is an empty cache.
pub fn load(engine: &mut Engine, path: &Path) -> Result<usize> {
    match fs::read(path) {
        Ok(bytes) => load_bytes(engine, &bytes),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(0),
        Err(source) => Err(GwError::Io {
            path: path.to_path_buf(),
            source,
        }),
    }
}

/// Writes the memo table to `path` through a temporary file and a rename.
pub fn store(engine: &Engine, path: &Path) -> Result<()> {
    let io = |source| GwError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, to_bytes(engine)).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}
