//! Deterministic file output: number formatting, CSV assembly, and the run
//! manifest that ties an output set to the exact invocation that made it.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Failure;

/// Shortest decimal that parses back to the same `f64`, which is exactly
/// what the standard formatter emits. Non-finite values spell themselves
/// out so CSV consumers can round-trip them with a plain parse.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

/// CSV builder: fixed header, comma separator, LF line endings, every
/// number through [`fmt_f64`].
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        let columns = header.split(',').count();
        let mut buf = String::with_capacity(4096);
        buf.push_str(header);
        buf.push('\n');
        Csv { buf, columns }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

/// Collects the files of one command run, writes them under the output
/// directory and finishes with `manifest.json` recording the command, the
/// resolved parameters and a content hash per file.
///
/// Hashes are computed from the exact bytes written, so verifying the
/// manifest against the directory needs nothing but a reader and SHA-256.
pub struct OutputSet {
    dir: PathBuf,
    command: &'static str,
    parameters: BTreeMap<String, Value>,
    hashes: BTreeMap<String, String>,
}

impl OutputSet {
    pub fn new(dir: &Path, command: &'static str) -> Result<Self, Failure> {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(OutputSet {
            dir: dir.to_path_buf(),
            command,
            parameters: BTreeMap::new(),
            hashes: BTreeMap::new(),
        })
    }

    /// Record one resolved parameter. Execution details that cannot change
    /// the output bytes (thread count, output directory) stay out, so the
    /// manifest identifies the result, not the machine.
    pub fn param(&mut self, key: &str, value: Value) {
        self.parameters.insert(key.into(), value);
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), Failure> {
        let path = self.dir.join(name);
        fs::write(&path, bytes)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        let digest = Sha256::digest(bytes);
        let mut hex = String::with_capacity(7 + 2 * digest.len());
        hex.push_str("sha256:");
        for b in digest {
            hex.push_str(&format!("{b:02x}"));
        }
        self.hashes.insert(name.into(), hex);
        Ok(())
    }

    /// Write `manifest.json` last, covering everything written so far.
    pub fn finish(self, version: &str) -> Result<(), Failure> {
        let manifest = json!({
            "command": self.command,
            "version": version,
            "parameters": Value::Object(self.parameters.into_iter().collect()),
            "outputs": Value::Object(
                self.hashes.into_iter().map(|(k, v)| (k, Value::String(v))).collect(),
            ),
        });
        let mut bytes = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| Failure::Io(format!("manifest serialization failed: {e}")))?;
        bytes.push(b'\n');
        let path = self.dir.join("manifest.json");
        fs::write(&path, &bytes)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(())
    }
}
