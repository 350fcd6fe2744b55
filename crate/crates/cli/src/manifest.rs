//! Run manifest: what ran, with which parameters, how long it took and where
//! each output came from. Written only on request so that stdout stays
//! byte-for-byte deterministic.

use std::path::Path;

use serde::Serialize;

#[derive(Debug, Default, Serialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    /// Entries that failed their checksum and were recomputed.
    pub corrupt: usize,
}

#[derive(Debug, Serialize)]
pub struct EntryRecord {
    pub digest: String,
    pub source: &'static str,
}

#[derive(Debug, Default, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub engine: String,
    pub seconds: f64,
    pub cache: CacheStats,
    pub entries: Vec<EntryRecord>,
    pub verdicts: Vec<serde_json::Value>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self).expect("manifests serialize") + "\n")
    }
}
