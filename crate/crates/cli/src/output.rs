//! CSV/JSON artifacts and their run manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use freelsd::montecarlo::{GAUSSIAN_METHOD, RNG_NAME};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Shortest decimal that parses back to the same `f64`; switches to
/// exponent notation for very large or small magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// A header row and data rows, rendered with LF line endings.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Where an artifact goes: `--out` resolved against the output directory,
/// or stdout when no path was given.
pub struct Sink {
    pub path: Option<PathBuf>,
    pub format: Format,
    started: Instant,
}

impl Sink {
    pub fn new(out: Option<&Path>, out_dir: Option<&Path>, format: Option<Format>, started: Instant) -> Self {
        let path = out.map(|p| match out_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        });
        let inferred = path
            .as_ref()
            .and_then(|p| p.extension())
            .map(|e| if e == "json" { Format::Json } else { Format::Csv });
        let format = format.or(inferred).unwrap_or(Format::Csv);
        Sink { path, format, started }
    }

    /// Writes the artifact in the chosen format and, for file output, the
    /// manifest next to it.
    pub fn emit(&self, table: &Table, json_body: Value, config: Value) -> std::io::Result<()> {
        let text = match self.format {
            Format::Csv => table.render(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&json_body).expect("JSON values serialize");
                s.push('\n');
                s
            }
        };
        match &self.path {
            None => {
                print!("{text}");
                Ok(())
            }
            Some(path) => {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    fs::create_dir_all(parent)?;
                }
                fs::write(path, text)?;
                self.write_manifest(path, config)
            }
        }
    }

    fn write_manifest(&self, path: &Path, config: Value) -> std::io::Result<()> {
        let manifest = json!({
            "artifact": path.file_name().map(|f| f.to_string_lossy().into_owned()),
            "format": self.format,
            "config": config,
            "version": env!("CARGO_PKG_VERSION"),
            "rng": RNG_NAME,
            "gaussian_method": GAUSSIAN_METHOD,
            "argv": std::env::args().collect::<Vec<_>>(),
            "wall_time_s": self.started.elapsed().as_secs_f64(),
        });
        let mut name = path.as_os_str().to_owned();
        name.push(".manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest).expect("JSON values serialize");
        text.push('\n');
        fs::write(PathBuf::from(name), text)
    }
}
