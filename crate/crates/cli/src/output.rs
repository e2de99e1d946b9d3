//! Column tables written as CSV (header row, 15 significant digits) or JSON
//! (`meta` plus `columns`).

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `json` for a `.json` extension, `csv` otherwise.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: IndexMap<String, Vec<f64>>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) -> &mut Self {
        self.columns.insert(name.into(), values);
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.values().next().map_or(0, Vec::len)
    }

    fn check(&self) -> CliResult<()> {
        let n = self.rows();
        match self.columns.iter().find(|(_, v)| v.len() != n) {
            Some((name, v)) => Err(CliError::Io(format!(
                "column '{name}' has {} rows, expected {n}",
                v.len()
            ))),
            None => Ok(()),
        }
    }
}

/// `out.csv` with suffix `edges` becomes `out_edges.csv`.
pub fn sibling_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{suffix}.{ext}"),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

pub fn format_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.14e}")
    } else {
        v.to_string()
    }
}

pub fn write_table(path: &Path, format: Format, meta: &Value, table: &Table) -> CliResult<()> {
    table.check()?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(table.columns.keys())?;
            for i in 0..table.rows() {
                w.write_record(table.columns.values().map(|c| format_value(c[i])))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let columns: IndexMap<&str, Vec<Option<f64>>> = table
                .columns
                .iter()
                .map(|(k, v)| {
                    (
                        k.as_str(),
                        v.iter().map(|x| x.is_finite().then_some(*x)).collect(),
                    )
                })
                .collect();
            let doc = serde_json::json!({ "meta": meta, "columns": columns });
            let mut w = BufWriter::new(File::create(path)?);
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Reads a table written by [`write_table`]; JSON `null` becomes NaN.
pub fn read_table(path: &Path, format: Format) -> CliResult<(Table, Option<Value>)> {
    match format {
        Format::Csv => {
            let mut r = csv::Reader::from_path(path)?;
            let names: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
            let mut cols: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
            for rec in r.records() {
                let rec = rec?;
                for (j, field) in rec.iter().enumerate() {
                    let v = field.trim().parse::<f64>().map_err(|e| {
                        CliError::Io(format!("{}: bad number '{field}': {e}", path.display()))
                    })?;
                    cols.get_mut(j)
                        .ok_or_else(|| CliError::Io(format!("{}: ragged row", path.display())))?
                        .push(v);
                }
            }
            Ok((
                Table {
                    columns: names.into_iter().zip(cols).collect(),
                },
                None,
            ))
        }
        Format::Json => {
            let doc: Value = serde_json::from_reader(BufReader::new(File::open(path)?))?;
            let cols = doc
                .get("columns")
                .and_then(Value::as_object)
                .ok_or_else(|| CliError::Io(format!("{}: missing 'columns'", path.display())))?;
            let mut table = Table::new();
            for (k, v) in cols {
                let arr = v.as_array().ok_or_else(|| {
                    CliError::Io(format!("{}: column '{k}' is not an array", path.display()))
                })?;
                table.push(
                    k.clone(),
                    arr.iter().map(|x| x.as_f64().unwrap_or(f64::NAN)).collect(),
                );
            }
            Ok((table, doc.get("meta").cloned()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new();
        t.push("x", vec![0.1, 1.0 / 3.0, -2.5e-300])
            .push("y", vec![std::f64::consts::PI, 1e300, 0.0]);
        t
    }

    #[test]
    fn json_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.json");
        write_table(&p, Format::Json, &serde_json::json!({"k": 1}), &sample()).unwrap();
        let (t, meta) = read_table(&p, Format::Json).unwrap();
        assert_eq!(t, sample());
        assert_eq!(meta.unwrap()["k"], 1);
    }

    #[test]
    fn csv_round_trip_to_printed_precision() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_table(&p, Format::Csv, &Value::Null, &sample()).unwrap();
        let (t, _) = read_table(&p, Format::Csv).unwrap();
        for (name, col) in &sample().columns {
            for (a, b) in col.iter().zip(&t.columns[name]) {
                assert!((a - b).abs() <= 5e-15 * a.abs(), "{a} {b}");
            }
        }
    }

    #[test]
    fn ragged_tables_are_rejected() {
        let mut t = sample();
        t.push("z", vec![1.0]);
        let dir = tempfile::tempdir().unwrap();
        assert!(write_table(&dir.path().join("t.csv"), Format::Csv, &Value::Null, &t).is_err());
    }

    #[test]
    fn siblings() {
        assert_eq!(
            sibling_path(Path::new("/a/b/out.csv"), "edges"),
            PathBuf::from("/a/b/out_edges.csv")
        );
        assert_eq!(sibling_path(Path::new("out"), "k"), PathBuf::from("out_k"));
    }
}
