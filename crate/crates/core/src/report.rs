//! CSV/JSON emission. Floats are written with 17 significant digits.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 17 significant digits, round-trip safe.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: u32,
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    /// One human-readable line.
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: measured {} bound {}; {}",
            self.criterion,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            fmt17(self.measured),
            fmt17(self.bound),
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
}

impl VerdictReport {
    pub fn new(verdicts: Vec<Verdict>) -> Self {
        let all_pass = verdicts.iter().all(|v| v.pass);
        VerdictReport { verdicts, all_pass }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::numerical(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("verdict JSON: {e}")))
    }
}

/// A table with a fixed header; cells are preformatted strings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        wr.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            wr.write_record(r).map_err(io)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::numerical(e.to_string()))
    }
}

/// Parameters and tool version written next to every output set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub parameters: serde_json::Value,
    pub files: Vec<String>,
}

/// Sends tables either to stdout or into an output directory.
#[derive(Debug, Clone)]
pub enum Sink {
    /// Tables after the first are preceded by a blank line.
    Stdout(std::cell::Cell<bool>),
    Dir(PathBuf),
}

impl Sink {
    pub fn new(out: Option<&Path>) -> Result<Self> {
        match out {
            None => Ok(Sink::Stdout(std::cell::Cell::new(false))),
            Some(p) => {
                std::fs::create_dir_all(p)?;
                Ok(Sink::Dir(p.to_path_buf()))
            }
        }
    }

    pub fn emit_table(&self, name: &str, table: &Table) -> Result<()> {
        match self {
            Sink::Stdout(started) => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                if started.replace(true) {
                    writeln!(lock)?;
                }
                table.write_csv(&mut lock)
            }
            Sink::Dir(d) => table.write_csv(std::fs::File::create(d.join(name))?),
        }
    }

    pub fn emit_text(&self, name: &str, text: &str) -> Result<()> {
        match self {
            Sink::Stdout(_) => {
                println!("{text}");
                Ok(())
            }
            Sink::Dir(d) => {
                std::fs::write(d.join(name), text)?;
                Ok(())
            }
        }
    }
}
