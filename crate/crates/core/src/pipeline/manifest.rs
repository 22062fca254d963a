use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub const MANIFEST_FORMAT: &str = "wellbeing-manifest";
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    /// Outputs are relative to the output directory; bundled resources
    /// appear as `bundled:<file>`.
    pub path: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl FileDigest {
    pub fn of(name: &str, path: &str, bytes: &[u8]) -> FileDigest {
        FileDigest {
            name: name.to_string(),
            path: path.to_string(),
            sha256: sha256_hex(bytes),
        }
    }
}

/// What a stage read and wrote, with content hashes and the full
/// configuration (minus the output directory) that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    pub stage: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl Manifest {
    pub fn new(stage: &str, seed: u64, config: serde_json::Value) -> Manifest {
        Manifest {
            format: MANIFEST_FORMAT.to_string(),
            version: MANIFEST_VERSION,
            stage: stage.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(content: &str) -> Result<Manifest> {
        let m: Manifest = serde_json::from_str(content)?;
        if m.format != MANIFEST_FORMAT || m.version != MANIFEST_VERSION {
            return Err(Error::Version {
                what: "manifest",
                found: format!("{} {}", m.format, m.version),
                expected: format!("{MANIFEST_FORMAT} {MANIFEST_VERSION}"),
            });
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Manifest> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Manifest::from_json(&content)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut m = Manifest::new("ingest", 7, serde_json::json!({"seed": 7}));
        m.inputs.push(FileDigest::of("corpus", "c.jsonl", b"abc"));
        assert_eq!(
            m.inputs[0].sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(Manifest::from_json(&m.to_json()).unwrap(), m);
        let other = m.to_json().replace("\"version\": 1", "\"version\": 9");
        assert!(matches!(Manifest::from_json(&other), Err(Error::Version { .. })));
    }
}
