use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Format tag of `manifest.json`.
pub const MANIFEST_FORMAT: &str = "femrep-manifest/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    pub fn of(path: impl Into<String>, contents: &[u8]) -> Self {
        FileDigest {
            path: path.into(),
            sha256: hex::encode(Sha256::digest(contents)),
            bytes: contents.len() as u64,
        }
    }

    /// Digest of a file on disk, named by `label`.
    pub fn read(label: impl Into<String>, path: &Path) -> std::io::Result<Self> {
        Ok(FileDigest::of(label, &std::fs::read(path)?))
    }
}

/// What one stage read, wrote and noted.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub summary: BTreeMap<String, serde_json::Value>,
    pub elapsed_ms: u64,
}

/// Record of every stage run into one output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format: String,
    pub stages: BTreeMap<String, StageRecord>,
}

impl Default for RunManifest {
    fn default() -> Self {
        RunManifest {
            format: MANIFEST_FORMAT.into(),
            stages: BTreeMap::new(),
        }
    }
}

impl RunManifest {
    /// Reads an existing manifest; anything unreadable or of another format
    /// starts a fresh one.
    pub fn load_or_default(path: &Path) -> Self {
        std::fs::read_to_string(path)
            .ok()
            .and_then(|s| serde_json::from_str::<RunManifest>(&s).ok())
            .filter(|m| m.format == MANIFEST_FORMAT)
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Every output file listed by any stage.
    pub fn outputs(&self) -> impl Iterator<Item = &FileDigest> {
        self.stages.values().flat_map(|s| s.outputs.iter())
    }
}
