//! Run manifests: the configuration echo plus a SHA-256 for every input and
//! artifact, so a run can be repeated and its outputs checked for tampering.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.toml";
const FORMAT: &str = "hetboost-manifest 1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileHash {
    /// Relative to the artifacts directory for outputs; as configured for inputs.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

impl FileHash {
    pub fn of(path: &str, content: &[u8]) -> Self {
        FileHash { path: path.to_string(), bytes: content.len() as u64, sha256: sha256_hex(content) }
    }
}

/// The boosting configuration the exported model was fitted with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub n_trees: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub min_child_cover: usize,
    /// Whether tree count and rate came from cross-validation.
    pub from_cv: bool,
    pub n_rows: usize,
    pub features: Vec<String>,
    pub groups: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: String,
    pub config: RunConfig,
    pub model: FittedModel,
    pub inputs: Vec<FileHash>,
    #[serde(rename = "artifact")]
    pub artifacts: Vec<FileHash>,
}

pub fn sha256_hex(content: &[u8]) -> String {
    hex::encode(Sha256::digest(content))
}

impl Manifest {
    pub fn new(config: RunConfig, model: FittedModel, inputs: Vec<FileHash>, artifacts: Vec<FileHash>) -> Self {
        Manifest {
            format: FORMAT.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            model,
            inputs,
            artifacts,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serialises")
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let m: Manifest = toml::from_str(text).map_err(|e| Error::format(path, e.to_string()))?;
        if m.format != FORMAT {
            return Err(Error::format(path, format!("unsupported manifest format `{}`", m.format)));
        }
        Ok(m)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::parse(&text, &path)
    }

    pub fn artifact(&self, name: &str) -> Option<&FileHash> {
        self.artifacts.iter().find(|a| a.path == name)
    }

    /// Re-hashes every listed artifact under `dir`.
    pub fn verify(&self, dir: &Path) -> Result<()> {
        for a in &self.artifacts {
            let path = dir.join(&a.path);
            let content = std::fs::read(&path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::Integrity(format!("artifact `{}` is missing", a.path)),
                _ => Error::io(&path, e),
            })?;
            if content.len() as u64 != a.bytes || sha256_hex(&content) != a.sha256 {
                return Err(Error::Integrity(format!("artifact `{}` does not match its manifest hash", a.path)));
            }
        }
        Ok(())
    }
}
