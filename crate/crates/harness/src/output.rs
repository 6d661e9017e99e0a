//! CSV and JSON writers. Floats use shortest round-trip formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{HarnessError, HarnessResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> HarnessResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(HarnessError::config(format!("unknown format '{s}'"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `dir/stem.<tag>.<ext>` next to `path`.
pub fn sibling_path(path: &Path, tag: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}.{tag}.{ext}"))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> HarnessResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonDoc<'a, M: Serialize, T: Serialize> {
    metadata: &'a M,
    rows: &'a [T],
}

/// Writes `rows` in `format`. CSV output gets a `<stem>.meta.json` sidecar;
/// JSON output embeds the metadata.
pub fn write_table<M: Serialize, T: Serialize>(path: &Path, format: Format, metadata: &M, rows: &[T]) -> HarnessResult<()> {
    match format {
        Format::Csv => {
            write_csv(path, rows)?;
            write_json_value(&sibling_path(path, "meta", "json"), metadata)
        }
        Format::Json => write_json_value(path, &JsonDoc { metadata, rows }),
    }
}

fn write_json_value<V: Serialize>(path: &Path, v: &V) -> HarnessResult<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, v)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
