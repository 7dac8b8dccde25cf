use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

/// Provenance stamped on every data file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub command: String,
    pub n: usize,
    pub k: usize,
    pub b: usize,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub prng: String,
    pub code_checksums: Vec<String>,
}

impl Metadata {
    /// Leading `# key: value` comment lines for CSV files.
    pub fn csv_header(&self) -> String {
        let mut s = String::new();
        s += &format!("# command: {}\n", self.command);
        s += &format!("# n: {}\n# k: {}\n# b: {}\n", self.n, self.k, self.b);
        s += &format!("# steps: {}\n# burn_in: {}\n", self.steps, self.burn_in);
        s += &format!("# seed: {}\n# prng: {}\n", self.seed, self.prng);
        s += &format!("# code_checksums: {}\n", self.code_checksums.join(" "));
        s
    }
}

/// Files written by one command. Unless [`OutputDir::commit`] is called,
/// dropping it deletes everything it wrote, so a failed run leaves no
/// partial results behind.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
    committed: bool,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
            committed: false,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.root.join(name);
        self.written.push(path.clone());
        fs::write(&path, text)?;
        Ok(path)
    }

    /// CSV body preceded by the metadata comment block.
    pub fn write_csv(&mut self, name: &str, meta: &Metadata, body: &str) -> Result<PathBuf> {
        self.write_text(name, &(meta.csv_header() + body))
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_text(name, &text)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = fs::remove_file(p);
            }
        }
    }
}

/// Formats `f64` for CSV, writing infinities as `inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.12e}")
    }
}
