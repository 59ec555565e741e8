//! Deterministic table serialization.
//!
//! CSV: a leading `# zeno-distill v<version>` comment, a header row,
//! then one row per record with floats at 17 significant digits
//! (round-trip exact for f64). JSON: an object with tool/version and a
//! `rows` array of per-record objects; non-finite values become null.
//! Identical configs produce byte-identical output in either format.

use std::io::Write;

use crate::config::OutputFormat;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Text(s) => serde_json::Value::from(s.as_str()),
        }
    }
}

/// 17 significant digits in scientific notation; NaN spelled lowercase
/// so the CSV stays greppable.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: Vec<String>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: OutputFormat, sink: &mut dyn Write) -> std::io::Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(sink),
            OutputFormat::Json => self.write_json(sink),
        }
    }

    fn write_csv(&self, sink: &mut dyn Write) -> std::io::Result<()> {
        writeln!(sink, "# zeno-distill v{}", env!("CARGO_PKG_VERSION"))?;
        writeln!(sink, "{}", self.headers.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(sink, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, sink: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: serde_json::Map<String, serde_json::Value> = self
                    .headers
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                serde_json::Value::Object(map)
            })
            .collect();
        let doc = serde_json::json!({
            "tool": "zeno-distill",
            "version": env!("CARGO_PKG_VERSION"),
            "rows": rows,
        });
        writeln!(sink, "{}", serde_json::to_string_pretty(&doc)?)
    }
}
