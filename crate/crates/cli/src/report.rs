//! CSV and JSON emission. Numbers are written with nine significant digits
//! and files are replaced atomically.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{RunConfig, Tolerances};
use crate::error::CliError;

pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes `bytes` to a temporary file next to `path` and renames it over.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.header).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row).expect("writing to memory");
        }
        w.into_inner().expect("flushing to memory")
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_atomic(path, &self.to_bytes())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// The property being verified, in words.
    pub statement: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Check {
    pub fn new(name: &'static str, statement: &'static str, passed: bool, detail: String) -> Self {
        Self { name, statement, status: if passed { Status::Pass } else { Status::Fail }, detail }
    }

    pub fn skipped(name: &'static str, statement: &'static str, detail: String) -> Self {
        Self { name, statement, status: Status::Skipped, detail }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Checks and recorded values of one command.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Section {
    pub checks: Vec<Check>,
    /// Derived quantities worth keeping with the run, already formatted.
    pub records: BTreeMap<&'static str, String>,
}

impl Section {
    pub fn check(&mut self, check: Check) {
        if check.failed() {
            log::error!("{}: {} ({})", check.name, check.statement, check.detail);
        }
        self.checks.push(check);
    }

    pub fn record(&mut self, key: &'static str, value: String) {
        self.records.insert(key, value);
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| c.failed()).map(|c| format!("{}: {} [{}]", c.name, c.statement, c.detail)).collect()
    }
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub command: &'static str,
    pub passed: bool,
    pub sections: BTreeMap<&'static str, Section>,
    pub tolerances: &'a Tolerances,
    pub config: &'a RunConfig,
}

impl Summary<'_> {
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| io_err(path, e))?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_nine_significant_digits() {
        assert_eq!(num(1.0), "1.00000000e0");
        assert_eq!(num(-0.000123456789), "-1.23456789e-4");
    }

    #[test]
    fn table_uses_unix_line_endings() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), String::new()]);
        assert_eq!(String::from_utf8(t.to_bytes()).unwrap(), "a,b\n1,\n");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
