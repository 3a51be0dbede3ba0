use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check: String,
    pub params: Value,
    /// Non-finite values serialize as `null`.
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(check: impl Into<String>, params: Value, value: f64, bound: f64, pass: bool) -> Self {
        Check {
            check: check.into(),
            params,
            value,
            bound,
            pass,
            witness: None,
            note: None,
        }
    }

    /// Residual check: passes when `value <= tol`.
    pub fn residual(check: impl Into<String>, params: Value, value: f64, tol: f64) -> Self {
        Self::new(check, params, value, tol, value <= tol)
    }

    pub fn failed(check: impl Into<String>, params: Value, why: impl Into<String>) -> Self {
        Self::new(check, params, f64::NAN, f64::NAN, false).note(why)
    }

    pub fn witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: Value,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, config: Value, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        Report {
            suite: suite.to_string(),
            config,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }
}

/// Rows for CSV output of an export.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn write_json<W: Write>(out: W, v: &impl Serialize) -> std::io::Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)
}

pub fn write_table<W: Write>(out: W, t: &Table) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&t.columns)?;
    for r in &t.rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn report_table(r: &Report) -> Table {
    let num = |x: f64| if x.is_finite() { x.to_string() } else { String::new() };
    Table {
        columns: vec!["check", "params", "value", "bound", "pass", "witness", "note"],
        rows: r
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.check.clone(),
                    c.params.to_string(),
                    num(c.value),
                    num(c.bound),
                    c.pass.to_string(),
                    c.witness.clone().unwrap_or_default(),
                    c.note.clone().unwrap_or_default(),
                ]
            })
            .collect(),
    }
}

pub fn emit(format: Format, out: Box<dyn Write>, json: &impl Serialize, table: impl FnOnce() -> Table) -> std::io::Result<()> {
    match format {
        Format::Json => write_json(out, json),
        Format::Csv => write_table(out, &table()).map_err(std::io::Error::other),
    }
}
