//! Plain-text field snapshots.
//!
//! ```text
//! gsqgfield v1, <n>, <L>, <t>
//! <x_0>, <value_0>
//! ...
//! ```
//! Numbers carry 17 significant digits, so a round trip is bit-exact.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use gsqg_core::{FourierField, Grid};

use crate::error::CliError;

const MAGIC: &str = "gsqgfield";
const VERSION: &str = "v1";

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub field: FourierField,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render(t: f64, field: &FourierField) -> String {
    let g = field.grid();
    let mut out = format!("{MAGIC} {VERSION}, {}, {}, {}\n", g.n(), num(g.half_length()), num(t));
    for (j, v) in field.values().iter().enumerate() {
        let _ = writeln!(out, "{}, {}", num(g.x(j)), num(*v));
    }
    out
}

pub fn write(path: &Path, t: f64, field: &FourierField) -> Result<(), CliError> {
    std::fs::write(path, render(t, field)).map_err(|e| CliError::io(path, e))
}

pub fn parse(path: &Path, text: &str) -> Result<Snapshot, CliError> {
    let corrupt = |reason: String| CliError::CorruptSnapshot {
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| corrupt("empty file".into()))?;
    let parts: Vec<&str> = header.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(corrupt(format!("malformed header `{header}`")));
    }
    let mut tag = parts[0].split_whitespace();
    if tag.next() != Some(MAGIC) {
        return Err(corrupt(format!("malformed header `{header}`")));
    }
    let version = tag.next().unwrap_or("");
    if version != VERSION {
        return Err(CliError::SnapshotVersion {
            path: path.to_path_buf(),
            found: version.to_string(),
        });
    }
    let n: usize = parts[1].parse().map_err(|_| corrupt(format!("bad sample count `{}`", parts[1])))?;
    let half: f64 = parts[2].parse().map_err(|_| corrupt(format!("bad half length `{}`", parts[2])))?;
    let t: f64 = parts[3].parse().map_err(|_| corrupt(format!("bad time `{}`", parts[3])))?;
    let grid: Arc<Grid> = Grid::new(n, half).map_err(|e| corrupt(e.to_string()))?;
    let mut values = Vec::with_capacity(n);
    for (j, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (x, v) = line
            .split_once(',')
            .ok_or_else(|| corrupt(format!("line {}: expected `x, value`", j + 2)))?;
        let _: f64 = x.trim().parse().map_err(|_| corrupt(format!("line {}: bad x", j + 2)))?;
        let v: f64 = v.trim().parse().map_err(|_| corrupt(format!("line {}: bad value", j + 2)))?;
        values.push(v);
    }
    if values.len() < n {
        return Err(corrupt(format!("truncated: {} of {n} samples", values.len())));
    }
    if values.len() != n {
        return Err(CliError::SnapshotLength {
            path: path.to_path_buf(),
            expected: n,
            found: values.len(),
        });
    }
    Ok(Snapshot {
        t,
        field: FourierField::from_values(&grid, values),
    })
}

pub fn read(path: &Path) -> Result<Snapshot, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(path, &text)
}
