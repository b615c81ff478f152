//! Rendering records as JSON lines, CSV or an aligned table, and writing
//! them out in one piece.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn columns(records: &[Value]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in records {
        if let Some(obj) = r.as_object() {
            for k in obj.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    cols
}

fn rows(records: &[Value], cols: &[String]) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect())
        .collect()
}

pub struct Rendered {
    /// Goes to the output file or stdout.
    pub body: String,
    /// Header and summary lines for formats that cannot carry them.
    pub side: String,
}

pub fn render(
    cfg: &RunConfig,
    command: &str,
    records: &[Value],
    summary: Option<Value>,
    with_csv_header: bool,
) -> io::Result<Rendered> {
    let header = json!({"header": {
        "tool": "quadclass",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg.header(),
    }});
    let summary = summary.map(|s| json!({ "summary": s }));
    let mut body = String::new();
    let mut side = String::new();
    match cfg.output_format {
        Format::Jsonl => {
            for line in std::iter::once(&header).chain(records).chain(summary.as_ref()) {
                body.push_str(&line.to_string());
                body.push('\n');
            }
        }
        Format::Csv => {
            let cols = columns(records);
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            if with_csv_header && !cols.is_empty() {
                w.write_record(&cols)?;
            }
            for row in rows(records, &cols) {
                w.write_record(&row)?;
            }
            body = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)
                .expect("csv output is utf-8");
        }
        Format::Table => {
            let cols = columns(records);
            let table = rows(records, &cols);
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| table.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap())
                .collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            if !cols.is_empty() {
                body.push_str(&line(&cols));
            }
            for r in &table {
                body.push_str(&line(r));
            }
        }
    }
    if cfg.output_format != Format::Jsonl {
        for line in std::iter::once(&header).chain(summary.as_ref()) {
            side.push_str(&line.to_string());
            side.push('\n');
        }
    }
    Ok(Rendered { body, side })
}

/// Append `text` to `path` with a single write, then sync.
pub fn append_atomically(path: &Path, text: &str) -> io::Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(text.as_bytes())?;
    file.sync_all()
}

pub fn is_empty_file(path: &Path) -> bool {
    std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true)
}
