//! CSV and JSON writers. Every file carries the code version and the config
//! hash; files appear atomically (write to a temporary sibling, then rename).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub code_version: String,
    pub config_sha256: String,
    pub command: String,
}

impl Metadata {
    pub fn new(command: &str, config_sha256: &str) -> Self {
        Self {
            code_version: format!("ponderomotive {VERSION}"),
            config_sha256: config_sha256.into(),
            command: command.into(),
        }
    }
}

/// Shortest round-trip form of `x`, switching to exponent notation outside
/// `[1e-5, 1e16)`. Independent of locale.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, meta: &Metadata) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", meta.code_version));
        out.push_str(&format!("# command = {}\n", meta.command));
        out.push_str(&format!("# config_sha256 = {}\n", meta.config_sha256));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `{"metadata": ..., <body fields>}` pretty-printed with a trailing newline.
pub fn json_document(meta: &Metadata, body: Value) -> String {
    let mut doc = json!({ "metadata": meta });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("json serializes");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp: PathBuf = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}
