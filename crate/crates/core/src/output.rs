//! Deterministic JSON / CSV encodings of analysis results.
//!
//! Reals are always printed with 17 significant digits in scientific
//! notation, through one formatter shared by both encodings.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::config::Config;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    /// A domain outcome left a slot without a value (e.g. no extremal past h*).
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

/// One leading digit, sixteen decimals and a signed exponent, e.g.
/// `6.6274341934918157e-1` or `2.0000000000000000e+0`.
pub fn format_real(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    let s = format!("{x:.16e}");
    Some(match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    })
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Real(x) => match format_real(*x) {
                Some(s) => Value::Number(s.parse::<Number>().expect("formatted real is a JSON number")),
                None => Value::Null,
            },
            Cell::Int(i) => Value::Number((*i).into()),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Missing => Value::Null,
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Real(x) => format_real(*x).unwrap_or_default(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Vec<(String, Cell)>,
    pub results: Vec<(String, Cell)>,
    /// Emitted column-wise under `results` in JSON and as-is in CSV.
    pub table: Table,
    pub config: Config,
}

impl OutputRecord {
    pub fn new(command: &str, config: Config) -> Self {
        OutputRecord {
            command: command.to_string(),
            inputs: Vec::new(),
            results: Vec::new(),
            table: Table::default(),
            config,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.inputs.push((key.to_string(), value.into()));
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Cell>) {
        self.results.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json_value(&self) -> Value {
        let pairs = |items: &[(String, Cell)]| -> Map<String, Value> {
            items.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()
        };
        let mut results = pairs(&self.results);
        for (j, name) in self.table.columns.iter().enumerate() {
            let col = self.table.rows.iter().map(|r| r[j].to_json()).collect();
            results.insert(name.clone(), Value::Array(col));
        }
        let config: Map<String, Value> = self
            .config
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), Cell::Real(v).to_json()))
            .collect();

        let mut top = Map::new();
        top.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
        top.insert("command".into(), Value::String(self.command.clone()));
        top.insert("inputs".into(), Value::Object(pairs(&self.inputs)));
        top.insert("config".into(), Value::Object(config));
        top.insert("results".into(), Value::Object(results));
        Value::Object(top)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json_value())?;
        out.write_all(b"\n")
    }

    /// Header row plus one line per table row, LF terminated. Records
    /// without a table emit their scalar results as a single row.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        if self.table.columns.is_empty() {
            w.write_record(self.results.iter().map(|(k, _)| k))?;
            w.write_record(self.results.iter().map(|(_, v)| v.to_csv()))?;
        } else {
            w.write_record(&self.table.columns)?;
            for row in &self.table.rows {
                w.write_record(row.iter().map(Cell::to_csv))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_have_seventeen_significant_digits() {
        let s = format_real(std::f64::consts::PI).unwrap();
        assert_eq!(s, "3.1415926535897931e+0");
        let mantissa: String = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).collect();
        assert_eq!(mantissa.len(), 17);
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
        assert_eq!(format_real(f64::NAN), None);
    }

    #[test]
    fn json_and_csv_share_values() {
        let mut rec = OutputRecord::new("demo", Config::default()).input("h", 0.25);
        rec.result("note", "ok");
        rec.table = Table::new(&["a", "b"]);
        rec.table.push(vec![Cell::Real(0.1), Cell::Missing]);
        rec.table.push(vec![Cell::Real(-2.5e-7), Cell::Int(3)]);

        let mut json = Vec::new();
        rec.write_json(&mut json).unwrap();
        let json = String::from_utf8(json).unwrap();
        assert!(json.contains("1.0000000000000001e-1"));
        assert!(json.contains("-2.4999999999999999e-7"));
        assert!(json.contains("null"));

        let mut csv = Vec::new();
        rec.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert_eq!(csv, "a,b\n1.0000000000000001e-1,\n-2.4999999999999999e-7,3\n");
    }

    #[test]
    fn scalar_records_become_one_csv_row() {
        let mut rec = OutputRecord::new("demo", Config::default());
        rec.result("x", 2.0);
        rec.result("ok", true);
        let mut csv = Vec::new();
        rec.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "x,ok\n2.0000000000000000e+0,true\n");
    }
}
