//! Rendering of reports as JSON, CSV or an aligned table.

use std::collections::BTreeSet;
use std::fmt::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A report: the full JSON document, plus the records that CSV and table
/// output list one per line (the document itself when absent).
pub struct Report {
    pub doc: Value,
    pub rows: Option<Vec<Value>>,
}

impl Report {
    pub fn single(doc: Value) -> Self {
        Report { doc, rows: None }
    }

    pub fn with_rows(doc: Value, rows: Vec<Value>) -> Self {
        Report { doc, rows: Some(rows) }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.doc.to_string(),
            Format::Csv => {
                let (cols, cells) = self.grid();
                let mut out = cols.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",");
                for row in cells {
                    out.push('\n');
                    out.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
                }
                out
            }
            Format::Table => {
                let (cols, cells) = self.grid();
                let widths: Vec<usize> = (0..cols.len())
                    .map(|i| cells.iter().map(|r| r[i].len()).chain([cols[i].len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: &[String]| {
                    let mut s = String::new();
                    for (i, c) in cells.iter().enumerate() {
                        if i > 0 {
                            s.push_str("  ");
                        }
                        let _ = write!(s, "{:<w$}", c, w = widths[i]);
                    }
                    s.trim_end().to_string()
                };
                let mut out = line(&cols);
                for row in &cells {
                    out.push('\n');
                    out.push_str(&line(row));
                }
                out
            }
        }
    }

    /// Columns are the union of record keys in sorted order.
    fn grid(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let records: Vec<&Map<String, Value>> = match &self.rows {
            Some(rows) => rows.iter().filter_map(Value::as_object).collect(),
            None => self.doc.as_object().into_iter().collect(),
        };
        let cols: Vec<String> =
            records.iter().flat_map(|r| r.keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
        let cells = records
            .iter()
            .map(|r| cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect())
            .collect();
        (cols, cells)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_sorts_columns_and_quotes() {
        let r = Report::with_rows(json!({}), vec![json!({"b": 1, "a": [1, 2]}), json!({"a": "x"})]);
        assert_eq!(r.render(Format::Csv), "a,b\n\"[1,2]\",1\nx,");
    }

    #[test]
    fn table_aligns() {
        let r = Report::single(json!({"long_name": 1, "x": "abc"}));
        assert_eq!(r.render(Format::Table), "long_name  x\n1          abc");
    }
}
