//! Tables written as CSV or as a JSON document that embeds the run config.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Missing,
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.8e}"),
            Cell::Missing => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Missing => Value::Null,
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// `{"config": .., "summary": .., "rows": [..]}`, pretty-printed.
pub fn json_document(config: &RunConfig, summary: Value, table: Option<&Table>) -> String {
    let mut doc = Map::new();
    doc.insert("config".into(), json!(config));
    doc.insert("summary".into(), summary);
    if let Some(t) = table {
        doc.insert("rows".into(), t.rows_json());
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    s.push('\n');
    s
}

/// Writes the rendered table to the configured output or stdout.
pub fn emit(config: &RunConfig, rendered: &str) -> Result<(), CliError> {
    match &config.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(rendered.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(CliError::Io(format!("stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

pub fn render(config: &RunConfig, summary: Value, table: &Table) -> String {
    match config.format {
        Format::Csv => table.to_csv(),
        Format::Json => json_document(config, summary, Some(table)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_nine_digits() {
        let mut t = Table::new(["x", "y"]);
        t.push(vec![1.0.into(), Cell::Num(1.0 / 3.0)]);
        t.push(vec![Cell::Missing, true.into()]);
        assert_eq!(t.to_csv(), "x,y\n1.00000000e0,3.33333333e-1\n,true\n");
    }

    #[test]
    fn json_rows_are_objects() {
        let mut t = Table::new(["x"]);
        t.push(vec![Cell::Text("a".into())]);
        assert_eq!(t.rows_json(), json!([{ "x": "a" }]));
    }
}
