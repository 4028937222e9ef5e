//! File persistence: JSON / JSON Lines, atomic writes and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Writes through a temporary sibling file and renames it into place.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(display(dir), e))?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidConfig(format!("{} is not a file path", display(path))))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(display(path), e));
    }
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(display(path), e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::json(display(path), e))
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec(value).map_err(|e| Error::json("serialize", e))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    atomic_write(path, &to_json_bytes(value)?)
}

/// One JSON object per nonblank line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| Error::json(format!("{}:{}", display(path), n + 1), e)))
        .collect()
}

pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut bytes = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut bytes, row).map_err(|e| Error::json("serialize", e))?;
        bytes.push(b'\n');
    }
    atomic_write(path, &bytes)
}

/// Provenance record written next to every command output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Fully resolved arguments; enough to replay the run.
    pub config_snapshot: serde_json::Value,
    pub seed: u64,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub toolkit_version: String,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    /// `<output>.manifest.json`, or `manifest.json` inside an output directory.
    pub fn path_for(output: &Path, is_dir: bool) -> PathBuf {
        if is_dir {
            output.join("manifest.json")
        } else {
            let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
            name.push(".manifest.json");
            output.with_file_name(name)
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self).map_err(|e| Error::json("manifest", e))?;
        bytes.push(b'\n');
        atomic_write(path, &bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_paths() {
        assert_eq!(
            RunManifest::path_for(Path::new("out/model.json"), false),
            PathBuf::from("out/model.json.manifest.json")
        );
        assert_eq!(RunManifest::path_for(Path::new("d"), true), PathBuf::from("d/manifest.json"));
    }

    #[test]
    fn jsonl_roundtrip_and_atomic_replace() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.jsonl");
        write_jsonl(&p, &[1, 2, 3]).unwrap();
        write_jsonl(&p, &[4]).unwrap();
        assert_eq!(read_jsonl::<i32>(&p).unwrap(), vec![4]);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        fs::write(&p, "1\nnope\n").unwrap();
        let err = read_jsonl::<i32>(&p).unwrap_err();
        assert!(err.to_string().contains(":2"));
    }
}
