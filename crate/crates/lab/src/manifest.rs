//! Run manifests: what was run, on which inputs, under which assumptions.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub library_version: String,
    pub assumptions: Vec<String>,
    pub output_sha256: String,
    pub output_bytes: usize,
}

/// Files under `path` (or `path` itself), sorted, so directory inputs digest stably.
fn expand(path: &Path) -> Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut out = Vec::new();
    let rd = std::fs::read_dir(path).map_err(|e| LabError::Io(path.to_path_buf(), e))?;
    for entry in rd {
        let entry = entry.map_err(|e| LabError::Io(path.to_path_buf(), e))?;
        out.extend(expand(&entry.path())?);
    }
    out.sort();
    Ok(out)
}

impl RunManifest {
    pub fn new(
        command: &[String],
        inputs: &[PathBuf],
        assumptions: &[String],
        output: &str,
    ) -> Result<Self> {
        let mut digests = Vec::new();
        for p in inputs {
            for f in expand(p)? {
                let bytes = std::fs::read(&f).map_err(|e| LabError::Io(f.clone(), e))?;
                digests.push(InputDigest {
                    path: f.display().to_string(),
                    sha256: sha256_hex(&bytes),
                });
            }
        }
        digests.sort_by(|a, b| a.path.cmp(&b.path));
        digests.dedup();
        Ok(RunManifest {
            command: command.to_vec(),
            inputs: digests,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            assumptions: assumptions.to_vec(),
            output_sha256: sha256_hex(output.as_bytes()),
            output_bytes: output.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
