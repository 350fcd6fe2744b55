//! Content-addressed result cache.
//!
//! Layout under the cache root:
//!
//! ```text
//! index.json              digest -> {command, bytes}
//! objects/ab/abcd....json {key, checksum, verdict, output}
//! ```
//!
//! Entries are written to a temporary file and renamed into place, so readers
//! never see a partial file. The index is advisory; `objects/` is authoritative.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything that determines an output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub command: String,
    /// Canonical slice list of the oriented input diagram.
    pub diagram: Option<String>,
    /// Remaining parameters, including ring, degree filter and output format.
    pub params: serde_json::Value,
    pub engine: String,
}

impl CacheKey {
    pub fn new(command: &str, diagram: Option<String>, params: serde_json::Value) -> Self {
        CacheKey { command: command.into(), diagram, params, engine: khtail_core::VERSION.into() }
    }

    /// Hex SHA-256 of the key's JSON; object keys serialize in sorted order.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("keys serialize")))
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    checksum: String,
    /// Verdict of a report, kept so that cache hits exit like fresh runs.
    verdict: Option<String>,
    output: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct IndexEntry {
    command: String,
    bytes: usize,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit { output: String, verdict: Option<String> },
    Miss,
    /// An entry exists but fails its checksum or does not parse.
    Corrupt,
}

pub fn checksum(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn open(root: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(root.join("objects"))?;
        Ok(Store { root: root.to_path_buf() })
    }

    pub fn object_path(&self, digest: &str) -> PathBuf {
        self.root.join("objects").join(&digest[..2]).join(format!("{digest}.json"))
    }

    pub fn get(&self, key: &CacheKey) -> Lookup {
        let path = self.object_path(&key.digest());
        let Ok(text) = fs::read_to_string(&path) else {
            return Lookup::Miss;
        };
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.key == *key && checksum(&e.output) == e.checksum => Lookup::Hit { output: e.output, verdict: e.verdict },
            _ => Lookup::Corrupt,
        }
    }

    pub fn put(&self, key: &CacheKey, output: &str, verdict: Option<&str>) -> std::io::Result<()> {
        let digest = key.digest();
        let entry = Entry {
            key: key.clone(),
            checksum: checksum(output),
            verdict: verdict.map(str::to_string),
            output: output.to_string(),
        };
        let text = serde_json::to_string_pretty(&entry).expect("entries serialize");
        write_atomic(&self.object_path(&digest), text.as_bytes())?;
        self.update_index(&digest, &key.command, output.len())
    }

    fn update_index(&self, digest: &str, command: &str, bytes: usize) -> std::io::Result<()> {
        let path = self.root.join("index.json");
        let mut index: BTreeMap<String, IndexEntry> =
            fs::read_to_string(&path).ok().and_then(|t| serde_json::from_str(&t).ok()).unwrap_or_default();
        index.insert(digest.to_string(), IndexEntry { command: command.to_string(), bytes });
        write_atomic(&path, serde_json::to_string_pretty(&index).expect("index serializes").as_bytes())
    }

    /// Digests listed in the index.
    #[cfg(test)]
    pub fn indexed(&self) -> Vec<String> {
        let path = self.root.join("index.json");
        let index: BTreeMap<String, IndexEntry> =
            fs::read_to_string(path).ok().and_then(|t| serde_json::from_str(&t).ok()).unwrap_or_default();
        index.into_keys().collect()
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir)?;
    let name = path.file_name().unwrap().to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let s = Store::open(dir.path()).unwrap();
        let k = CacheKey::new("compute", Some("x+ 0\n".into()), json!({"ring": "z"}));
        assert_eq!(s.get(&k), Lookup::Miss);
        s.put(&k, "{\"a\": 1}\n", Some("pass")).unwrap();
        assert_eq!(s.get(&k), Lookup::Hit { output: "{\"a\": 1}\n".into(), verdict: Some("pass".into()) });
        assert_eq!(s.indexed(), vec![k.digest()]);
        let p = s.object_path(&k.digest());
        let text = fs::read_to_string(&p).unwrap().replace("\\\"a\\\": 1", "\\\"a\\\": 2");
        fs::write(&p, text).unwrap();
        assert_eq!(s.get(&k), Lookup::Corrupt);
    }

    #[test]
    fn digest_ignores_map_insertion_order() {
        let a = CacheKey::new("c", None, json!({"x": 1, "y": 2}));
        let mut m = serde_json::Map::new();
        m.insert("y".into(), json!(2));
        m.insert("x".into(), json!(1));
        let b = CacheKey::new("c", None, serde_json::Value::Object(m));
        assert_eq!(a.digest(), b.digest());
    }
}
