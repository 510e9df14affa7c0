//! Artifact files of one run. Each file is written once, by one writer.

use std::path::{Path, PathBuf};

use gsqg_core::FourierField;

use crate::error::CliError;
use crate::snapshot;

/// Numeric CSV table; values use 17 significant digits.
#[derive(Debug, Clone)]
pub struct Table {
    header: String,
    rows: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            header: columns.join(","),
            rows: Vec::new(),
        }
    }

    pub fn with_header(header: String) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(","));
    }

    pub fn push_row(&mut self, row: String) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.clone();
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }
}

#[derive(Debug)]
pub struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(path)
    }

    pub fn write_table(&mut self, name: &str, table: &Table) -> Result<PathBuf, CliError> {
        self.write_text(name, &table.render())
    }

    pub fn write_snapshot(&mut self, name: &str, t: f64, field: &FourierField) -> Result<PathBuf, CliError> {
        self.write_text(name, &snapshot::render(t, field))
    }
}
