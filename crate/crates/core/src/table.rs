//! Ordered numeric tables with metadata, written as CSV (with `# key=value`
//! comment lines) or JSON. Number formatting is fixed so identical inputs
//! give byte-identical files.

use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableError {
    #[error("row has {got} values but the header has {expected}")]
    RowLength { expected: usize, got: usize },
    #[error("non-finite value {value} in column {column}")]
    NonFinite { column: String, value: f64 },
    #[error("malformed table: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
}

/// Twelve significant digits; scientific notation below `1e-4` or from `1e6` up.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl SweepTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        SweepTable { header: header.into_iter().map(Into::into).collect(), ..Default::default() }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.set_meta(key, value);
        self
    }

    /// Inserts or replaces a metadata entry, keeping first-insertion order.
    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        let value = value.to_string();
        match self.metadata.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key, value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), TableError> {
        if row.len() != self.header.len() {
            return Err(TableError::RowLength { expected: self.header.len(), got: row.len() });
        }
        if let Some((i, &value)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(TableError::NonFinite { column: self.header[i].clone(), value });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Appends a column; `values` must have one entry per row.
    pub fn push_column(&mut self, name: impl Into<String>, values: &[f64]) -> Result<(), TableError> {
        let name = name.into();
        if values.len() != self.rows.len() {
            return Err(TableError::RowLength { expected: self.rows.len(), got: values.len() });
        }
        if let Some(&value) = values.iter().find(|v| !v.is_finite()) {
            return Err(TableError::NonFinite { column: name, value });
        }
        for (row, &v) in self.rows.iter_mut().zip(values) {
            row.push(v);
        }
        self.header.push(name);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        let mut table = SweepTable::default();
        let mut have_header = false;
        for (n, line) in text.lines().enumerate() {
            if let Some(comment) = line.strip_prefix('#') {
                let (k, v) = comment
                    .trim_start()
                    .split_once('=')
                    .ok_or_else(|| TableError::Parse(format!("line {}: comment is not key=value", n + 1)))?;
                table.set_meta(k, v);
            } else if line.trim().is_empty() {
                continue;
            } else if !have_header {
                table.header = line.split(',').map(str::to_string).collect();
                have_header = true;
            } else {
                let row = line
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| TableError::Parse(format!("line {}: {e}", n + 1)))?;
                table.push_row(row)?;
            }
        }
        if !have_header {
            return Err(TableError::Parse("missing header row".into()));
        }
        Ok(table)
    }

    /// JSON mirror: `{"metadata": {...}, "columns": [...], "rows": [[...]]}`,
    /// numbers rounded to the same twelve digits as the CSV.
    pub fn to_json(&self) -> Value {
        let metadata: Map<String, Value> =
            self.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|&x| json_number(x)).collect()))
            .collect();
        json!({ "metadata": metadata, "columns": self.header, "rows": rows })
    }
}

/// A finite value as a JSON number carrying twelve significant digits.
pub fn json_number(x: f64) -> Value {
    let rounded: f64 = format_number(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}
