//! Plain-text reports with a JSON mirror carrying the same numbers.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Int(i) => i.to_string(),
            Field::Num(x) => format!("{x:?}"),
            Field::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(i) => json!(i),
            Field::Num(x) => json!(x),
            Field::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<usize> for Field {
    fn from(x: usize) -> Self {
        Field::Int(x as i64)
    }
}

impl From<i64> for Field {
    fn from(x: i64) -> Self {
        Field::Int(x)
    }
}

impl From<u32> for Field {
    fn from(x: u32) -> Self {
        Field::Int(x as i64)
    }
}

impl From<u64> for Field {
    fn from(x: u64) -> Self {
        Field::Text(x.to_string())
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub fields: Vec<(String, Field)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Report::default()
        }
    }

    pub fn field(&mut self, name: &str, value: impl Into<Field>) {
        self.fields.push((name.to_string(), value.into()));
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.columns = names.iter().map(|s| s.to_string()).collect();
    }

    pub fn row(&mut self, values: Vec<Field>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    /// Records `value ≤ tol`.
    pub fn check(&mut self, name: &str, value: f64, tol: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            value,
            tol,
            pass: value <= tol,
        });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            let _ = writeln!(out, "  {k:<width$}  {}", v.text());
        }
        if !self.columns.is_empty() {
            let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Field::text).collect()).collect();
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].len())
                        .chain([self.columns[j].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            out.push('\n');
            let line = |vals: Vec<&str>| {
                let padded: Vec<String> = vals.iter().zip(&widths).map(|(v, w)| format!("{v:>w$}")).collect();
                format!("  {}\n", padded.join("  "))
            };
            out += &line(self.columns.iter().map(String::as_str).collect());
            for r in &cells {
                out += &line(r.iter().map(String::as_str).collect());
            }
        }
        if !self.checks.is_empty() {
            out.push('\n');
            for c in &self.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "  {verdict}  {}: {:?} <= {:?}", c.name, c.value, c.tol);
            }
        }
        let _ = writeln!(out, "\nresult: {}", if self.pass() { "PASS" } else { "FAIL" });
        out
    }

    pub fn to_json(&self) -> String {
        let fields: Map<String, Value> = self.fields.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Field::json)).collect()))
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "value": c.value, "tol": c.tol, "pass": c.pass}))
            .collect();
        let v = json!({
            "command": self.command,
            "fields": fields,
            "rows": rows,
            "checks": checks,
            "pass": self.pass(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("finite report");
        s.push('\n');
        s
    }
}
