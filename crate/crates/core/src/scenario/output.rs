use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use super::{angle_label, SweepResult};
use crate::error::{Error, Result};
use crate::wehrl::Constants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format `{s}`; expected csv or json"))),
        }
    }
}

/// Rows of a sweep as written to disk: one `f64` per column (`NaN` where a
/// value is missing) and the joined error messages, empty for clean rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub errors: Vec<String>,
}

impl Table {
    /// Equality that compares numbers by bit pattern, so `NaN` cells match.
    pub fn bitwise_eq(&self, other: &Table) -> bool {
        self.columns == other.columns
            && self.errors == other.errors
            && self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            })
    }

    /// Header plus one line per row, LF-terminated. Numbers use 17
    /// significant digits, enough to parse back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let header = self.columns.iter().map(String::as_str).chain(["error"]);
        w.write_record(header).expect("writing to memory");
        for (row, err) in self.rows.iter().zip(&self.errors) {
            let cells = row.iter().map(|x| format!("{x:.16e}")).chain([err.clone()]);
            w.write_record(cells).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("ASCII output")
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let bad = |e: &dyn fmt::Display| Error::Config(format!("malformed CSV: {e}"));
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let mut columns: Vec<String> = r.headers().map_err(|e| bad(&e))?.iter().map(String::from).collect();
        if columns.last().map(String::as_str) != Some("error") {
            return Err(bad(&"last column must be `error`"));
        }
        columns.pop();
        let mut table = Table {
            columns,
            ..Default::default()
        };
        for rec in r.records() {
            let rec = rec.map_err(|e| bad(&e))?;
            let n = table.columns.len();
            let row = rec
                .iter()
                .take(n)
                .map(|cell| cell.parse::<f64>().map_err(|e| bad(&format!("`{cell}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            table.rows.push(row);
            table.errors.push(rec.get(n).unwrap_or_default().to_string());
        }
        Ok(table)
    }

    /// `{"meta": ..., "records": [{column: value, ..., "error": ...}]}`;
    /// missing values are `null`. `meta.columns` keeps the column order.
    pub fn to_json(&self, meta: Value) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .zip(&self.errors)
            .map(|(row, err)| {
                let mut obj = Map::new();
                for (name, &x) in self.columns.iter().zip(row) {
                    obj.insert(name.clone(), if x.is_finite() { json!(x) } else { Value::Null });
                }
                obj.insert("error".into(), if err.is_empty() { Value::Null } else { json!(err) });
                Value::Object(obj)
            })
            .collect();
        let mut meta = meta;
        if let Value::Object(m) = &mut meta {
            m.insert("columns".into(), json!(self.columns));
        }
        let doc = json!({ "meta": meta, "records": records });
        let mut out = serde_json::to_string_pretty(&doc).expect("serialising a JSON value");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Table> {
        let bad = |what: &str| Error::Config(format!("malformed JSON output: {what}"));
        let doc: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let columns: Vec<String> = doc["meta"]["columns"]
            .as_array()
            .ok_or_else(|| bad("meta.columns missing"))?
            .iter()
            .map(|c| c.as_str().map(String::from).ok_or_else(|| bad("column name")))
            .collect::<Result<_>>()?;
        let records = doc["records"].as_array().ok_or_else(|| bad("records missing"))?;
        let mut table = Table {
            columns,
            ..Default::default()
        };
        for rec in records {
            let row = table
                .columns
                .iter()
                .map(|c| match &rec[c] {
                    Value::Null => Ok(f64::NAN),
                    v => v.as_f64().ok_or_else(|| bad(c)),
                })
                .collect::<Result<Vec<_>>>()?;
            table.rows.push(row);
            table.errors.push(rec["error"].as_str().unwrap_or_default().to_string());
        }
        Ok(table)
    }
}

fn constants_name(c: Constants) -> &'static str {
    match c {
        Constants::Exact => "exact",
        Constants::PaperLiteral => "paper-literal",
    }
}

impl SweepResult {
    /// The JSON `meta` block: tool, version, constants mode, wall time, and
    /// the configuration that produced the records.
    pub fn meta_json(&self) -> Value {
        let cfg = &self.config;
        let model = cfg.model();
        let grid = model.t_grid();
        json!({
            "tool": "jcm-wehrl",
            "version": self.meta.version,
            "constants": constants_name(self.meta.constants),
            "wall_time_s": self.meta.wall_time.as_secs_f64(),
            "config": {
                "alpha": model.alpha(),
                "vartheta": model.vartheta(),
                "n_max": model.n_max(),
                "t_first": grid.first(),
                "t_last": grid.last(),
                "t_points": grid.len(),
                "series_tol": cfg.policy().tol(),
                "quad_tol": cfg.policy().quad_tol(),
                "quantities": cfg.quantities().iter().map(|q| q.token()).collect::<Vec<_>>(),
                "theta": cfg.theta_pi().iter().map(|&a| angle_label(a)).collect::<Vec<_>>(),
                "phi": cfg.phi_pi().iter().map(|&a| angle_label(a)).collect::<Vec<_>>(),
            },
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let table = self.table();
        match format {
            OutputFormat::Csv => table.to_csv(),
            OutputFormat::Json => table.to_json(self.meta_json()),
        }
    }
}

/// Write a sweep to `path` in the given format.
pub fn write_output(result: &SweepResult, format: OutputFormat, path: &Path) -> Result<()> {
    fs::write(path, result.render(format)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Read back a file written by [`write_output`].
pub fn read_table(path: &Path, format: OutputFormat) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    match format {
        OutputFormat::Csv => Table::from_csv(&text),
        OutputFormat::Json => Table::from_json(&text),
    }
}
