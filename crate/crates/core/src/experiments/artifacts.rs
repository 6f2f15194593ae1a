use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{sha256_hex, ExperimentConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Provenance record written next to the artifacts of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample_count: Option<usize>,
    /// Input files the command read, with their digests.
    pub inputs: Vec<ArtifactRecord>,
    pub artifacts: Vec<ArtifactRecord>,
}

/// Writes artifact files into one directory and records their digests.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    manifest: Manifest,
}

impl ArtifactWriter {
    pub fn new(dir: &Path, command: &str, cfg: &ExperimentConfig) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(ArtifactWriter {
            dir: dir.to_path_buf(),
            manifest: Manifest {
                command: command.to_string(),
                config_sha256: cfg.hash()?,
                seed: cfg.seed,
                sample_count: None,
                inputs: Vec::new(),
                artifacts: Vec::new(),
            },
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn set_sample_count(&mut self, n: usize) {
        self.manifest.sample_count = Some(n);
    }

    /// Records an input file by name and digest.
    pub fn record_input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        self.manifest.inputs.push(ArtifactRecord {
            file: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.manifest.artifacts.push(ArtifactRecord {
            file: name.to_string(),
            sha256: sha256_hex(contents),
            bytes: contents.len() as u64,
        });
        Ok(path)
    }

    /// Writes `<command>.manifest.json` and returns the manifest.
    pub fn finish(self) -> Result<Manifest> {
        let name = format!("{}.manifest.json", self.manifest.command);
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(self.manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lists_digests() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::default();
        let mut w = ArtifactWriter::new(dir.path(), "demo", &cfg).unwrap();
        w.write("a.txt", b"abc").unwrap();
        w.set_sample_count(3);
        let m = w.finish().unwrap();
        assert_eq!(m.artifacts[0].sha256, sha256_hex(b"abc"));
        assert_eq!(m.config_sha256, cfg.hash().unwrap());
        let text = fs::read_to_string(dir.path().join("demo.manifest.json")).unwrap();
        let back: Manifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
