//! Rendering of results as CSV tables or JSON.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A flat table; the JSON form is an array of objects keyed by column.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> =
                        self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.clone())).collect();
                    Value::Object(m)
                })
                .collect(),
        )
    }

    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// What a command produced: a table, a JSON document, or both (the
/// document wins for JSON output).
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub table: Option<Table>,
    pub document: Option<Value>,
}

impl Report {
    pub fn table(t: Table) -> Self {
        Report { table: Some(t), document: None }
    }

    pub fn with_document(mut self, v: Value) -> Self {
        self.document = Some(v);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = match (&self.document, &self.table) {
                    (Some(d), _) => d.clone(),
                    (None, Some(t)) => t.to_json(),
                    (None, None) => json!(null),
                };
                let mut s = serde_json::to_string_pretty(&v).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => match &self.table {
                Some(t) => t.to_csv(),
                None => {
                    // Documents without a natural table become one JSON cell.
                    let mut s = String::from("value\n");
                    let _ = writeln!(s, "{}", csv_cell(&Value::String(self.document.clone().unwrap_or(json!(null)).to_string())));
                    s
                }
            },
        }
    }
}
