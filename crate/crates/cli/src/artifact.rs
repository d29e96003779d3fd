//! Run manifests, content digests, atomic file writes, and the advisory
//! results cache.
//!
//! Every file this module writes goes through a temp-file-plus-rename so a
//! crash never leaves a torn output next to a manifest that vouches for it.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process;

use chrono::{SecondsFormat, Utc};
use sha2::{Digest, Sha256};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_DIR_ENV: &str = "SUPERPAT_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".superpat-cache";

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Metadata written next to every output: enough to re-run the command and
/// to verify the output bytes.
pub struct RunManifest {
    pub subcommand: String,
    /// Canonicalized (sorted) parameter map, including the output format.
    pub parameters: BTreeMap<String, String>,
    pub code_version: String,
    /// RFC 3339 UTC timestamp of the run that produced the output.
    pub timestamp: String,
    /// `sha256:<hex>` over the exact output bytes.
    pub output_digest: String,
    /// Exit code the producing run finished with (0 or 1; error runs write
    /// no artifacts).
    pub exit_code: i32,
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        parameters: &BTreeMap<String, String>,
        output: &[u8],
        exit_code: i32,
    ) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters: parameters.clone(),
            code_version: CODE_VERSION.to_string(),
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            output_digest: format!("sha256:{}", sha256_hex(output)),
            exit_code,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "code_version": self.code_version,
            "timestamp": self.timestamp,
            "output_digest": self.output_digest,
            "exit_code": self.exit_code,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(&self.to_json()).expect("manifest is plain data");
        bytes.push(b'\n');
        bytes
    }
}

/// Writes `bytes` to `path` atomically (same-directory temp file + rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?
        .to_string_lossy()
        .into_owned();
    let tmp = path.with_file_name(format!(".{file_name}.tmp-{}", process::id()));
    fs::write(&tmp, bytes)?;
    match fs::rename(&tmp, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

/// Conventional manifest path for an output file: `<output>.manifest.json`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push_str(".manifest.json");
    output.with_file_name(name)
}

/// Writes the output and its manifest side by side, both atomically.
pub fn write_output_with_manifest(
    output_path: &Path,
    bytes: &[u8],
    manifest: &RunManifest,
) -> io::Result<()> {
    write_atomic(output_path, bytes)?;
    write_atomic(&manifest_path_for(output_path), &manifest.to_bytes())
}

/// Advisory cache of finished runs, keyed by a hash of the canonical
/// parameter map and the code version. Entries store the exact output
/// bytes plus the manifest of the producing run, so a hit replays the
/// original output byte for byte.
pub struct Cache {
    dir: PathBuf,
}

pub struct CacheHit {
    pub output: Vec<u8>,
    pub exit_code: i32,
}

impl Cache {
    pub fn open() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        Cache { dir }
    }

    /// Key over (subcommand, canonical parameters, code version). The
    /// parameter map already contains the output format, so text and JSON
    /// runs cache separately.
    pub fn key(subcommand: &str, parameters: &BTreeMap<String, String>) -> String {
        let mut canonical = String::new();
        canonical.push_str("subcommand=");
        canonical.push_str(subcommand);
        canonical.push('\n');
        for (k, v) in parameters {
            canonical.push_str(k);
            canonical.push('=');
            canonical.push_str(v);
            canonical.push('\n');
        }
        canonical.push_str("code_version=");
        canonical.push_str(CODE_VERSION);
        canonical.push('\n');
        sha256_hex(canonical.as_bytes())
    }

    fn output_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.out"))
    }

    fn manifest_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.manifest.json"))
    }

    /// Returns the stored output only when its digest still verifies against
    /// the stored manifest; a corrupt entry is treated as a miss.
    pub fn lookup(&self, key: &str) -> Option<CacheHit> {
        let output = fs::read(self.output_path(key)).ok()?;
        let manifest_bytes = fs::read(self.manifest_path(key)).ok()?;
        let manifest: serde_json::Value = serde_json::from_slice(&manifest_bytes).ok()?;
        let digest = manifest.get("output_digest")?.as_str()?;
        if digest != format!("sha256:{}", sha256_hex(&output)) {
            return None;
        }
        let exit_code = manifest.get("exit_code")?.as_i64()? as i32;
        Some(CacheHit { output, exit_code })
    }

    pub fn store(&self, key: &str, output: &[u8], manifest: &RunManifest) -> io::Result<()> {
        write_atomic(&self.output_path(key), output)?;
        write_atomic(&self.manifest_path(key), &manifest.to_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_matches_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_digest_verifies_against_output() {
        let params = BTreeMap::from([("k".to_string(), "3".to_string())]);
        let manifest = RunManifest::new("bounds", &params, b"hello\n", 0);
        assert_eq!(manifest.output_digest, format!("sha256:{}", sha256_hex(b"hello\n")));
        let json = manifest.to_json();
        assert_eq!(json["parameters"]["k"], "3");
        assert_eq!(json["exit_code"], 0);
    }

    #[test]
    fn cache_key_is_order_independent_but_value_sensitive() {
        let a = BTreeMap::from([
            ("k".to_string(), "3".to_string()),
            ("d".to_string(), "4".to_string()),
        ]);
        let b = BTreeMap::from([
            ("d".to_string(), "4".to_string()),
            ("k".to_string(), "3".to_string()),
        ]);
        assert_eq!(Cache::key("search", &a), Cache::key("search", &b));
        let mut c = a.clone();
        c.insert("k".to_string(), "4".to_string());
        assert_ne!(Cache::key("search", &a), Cache::key("search", &c));
        assert_ne!(Cache::key("search", &a), Cache::key("simulate", &a));
    }

    #[test]
    fn atomic_write_and_cache_round_trip() {
        let tmp = std::env::temp_dir().join(format!("superpat-artifact-test-{}", process::id()));
        let _ = fs::remove_dir_all(&tmp);
        fs::create_dir_all(&tmp).unwrap();

        let out = tmp.join("report.txt");
        write_atomic(&out, b"payload").unwrap();
        assert_eq!(fs::read(&out).unwrap(), b"payload");
        assert_eq!(manifest_path_for(&out), tmp.join("report.txt.manifest.json"));

        std::env::set_var(CACHE_DIR_ENV, tmp.join("cache"));
        let cache = Cache::open();
        let params = BTreeMap::from([("k".to_string(), "2".to_string())]);
        let key = Cache::key("simulate", &params);
        assert!(cache.lookup(&key).is_none());
        let manifest = RunManifest::new("simulate", &params, b"result\n", 0);
        cache.store(&key, b"result\n", &manifest).unwrap();
        let hit = cache.lookup(&key).expect("stored entry");
        assert_eq!(hit.output, b"result\n");
        assert_eq!(hit.exit_code, 0);

        // A corrupted payload no longer verifies and reads as a miss.
        fs::write(tmp.join("cache").join(format!("{key}.out")), b"tampered").unwrap();
        assert!(cache.lookup(&key).is_none());

        std::env::remove_var(CACHE_DIR_ENV);
        let _ = fs::remove_dir_all(&tmp);
    }
}
