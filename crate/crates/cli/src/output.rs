//! Output files that disappear again if the command fails.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub struct Outputs {
    dir: PathBuf,
    created_dir: bool,
    written: Vec<PathBuf>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), created_dir, written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Writes `contents` to `name` inside the output directory, creating
    /// parent directories as needed.
    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
        }
        self.written.push(path.clone());
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }

    /// Removes everything written so far.
    pub fn discard(self) {
        for p in self.written.iter().rev() {
            let _ = fs::remove_file(p);
            let mut parent = p.parent();
            while let Some(d) = parent {
                if d == self.dir || fs::remove_dir(d).is_err() {
                    break;
                }
                parent = d.parent();
            }
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

/// Runs `body` and discards its outputs if it fails.
pub fn transactional<T>(dir: &Path, body: impl FnOnce(&mut Outputs) -> Result<T>) -> Result<T> {
    let mut out = Outputs::new(dir)?;
    match body(&mut out) {
        Ok(v) => Ok(v),
        Err(e) => {
            out.discard();
            Err(e)
        }
    }
}
