//! CSV and JSON emission with embedded reproducibility headers.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};

use crate::config::Config;

/// A CSV file with `# key = value` header comments carrying the resolved
/// configuration, then a column header row, then data rows.
pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(cfg: &Config, columns: &[&str]) -> Self {
        let mut buf = String::new();
        for (k, v) in cfg.resolved() {
            let _ = writeln!(buf, "# {k} = {v}");
        }
        let _ = writeln!(buf, "{}", columns.join(","));
        Self { buf }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.buf, "{}", cells.join(","));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, &self.buf).with_context(|| format!("writing {}", path.display()))
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.12e}")
    }
}

/// Serialize a summary value to pretty JSON with the resolved config
/// embedded under a `config` key.
pub fn write_json<T: serde::Serialize>(path: &Path, cfg: &Config, summary: &T) -> Result<()> {
    let config: std::collections::BTreeMap<&str, &str> = cfg.resolved().collect();
    let doc = serde_json::json!({
        "config": config,
        "summary": summary,
    });
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
