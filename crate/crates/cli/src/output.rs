use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use farey_core::report::{Format, Table};
use serde_json::{json, Map, Value};

/// What a subcommand emits: a table plus optional extra JSON fields.
pub struct Artifact {
    pub table: Table,
    pub extra: Map<String, Value>,
    /// Lines printed before the table in text mode.
    pub preamble: Vec<String>,
}

impl Artifact {
    pub fn new(table: Table) -> Self {
        Artifact { table, extra: Map::new(), preamble: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.extra.insert(key.into(), value);
        self
    }

    pub fn render(&self, format: Format, params: &[(String, String)]) -> anyhow::Result<String> {
        let mut table = self.table.clone();
        let echo = params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
        table.comments.insert(0, format!("params: {echo}"));
        Ok(match format {
            Format::Json => {
                let mut v = table.to_json();
                let obj = v.as_object_mut().expect("table json is an object");
                let p: Map<String, Value> = params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                obj.insert("params".into(), Value::Object(p));
                for (k, x) in &self.extra {
                    obj.insert(k.clone(), x.clone());
                }
                serde_json::to_string_pretty(&v)? + "\n"
            }
            Format::Csv => table.to_csv()?,
            Format::Text => {
                let mut out = String::new();
                for line in &self.preamble {
                    out.push_str(line);
                    out.push('\n');
                }
                out + &table.to_text()
            }
        })
    }
}

/// Resolves where output goes: an explicit path (relative paths are taken
/// inside the default directory when one is set), the default directory with
/// a file named after the subcommand, or standard output.
pub fn destination(output: Option<&Path>, dir: Option<&Path>, name: &str, format: Format) -> Option<PathBuf> {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Text => "txt",
    };
    match (output, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(format!("{name}.{ext}"))),
        (None, None) => None,
    }
}

pub fn emit(text: &str, dest: Option<&Path>) -> anyhow::Result<()> {
    match dest {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, text)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
