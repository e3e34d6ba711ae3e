//! CSV reports: a commented metadata header, one table of rows, and a
//! commented summary block.
//!
//! ```text
//! # schema: sphlab-report/1 kernel
//! # tool: sphlab 0.1.0
//! # timestamp: 2026-01-01T00:00:00Z
//! # config: {...}
//! n,gamma,...
//! ...
//! # summary
//! # slope[gamma=1.5707963267948966]: 4.9...e-1
//! ```
//!
//! Only the timestamp line varies between runs with identical configuration.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::config::FORMAT_VERSION;

pub const SCHEMA_PREFIX: &str = "sphlab-report/";
pub const TIMESTAMP_KEY: &str = "timestamp";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("missing schema line")]
    MissingSchema,
    #[error("unsupported report schema {0:?} (this build reads {SCHEMA_PREFIX}{FORMAT_VERSION})")]
    UnknownVersion(String),
    #[error("malformed report: {0}")]
    Malformed(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Value {
    /// 17 significant digits in scientific notation for floats.
    pub fn render(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Float(x) => format_float(*x),
            Value::Text(s) => s.clone(),
            Value::Empty => String::new(),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Empty, Value::Float)
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub kind: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, String)>,
}

impl Report {
    pub fn new(kind: &str, columns: &[&str]) -> Self {
        Self {
            kind: kind.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn summarize(&mut self, key: impl Into<String>, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    pub fn summarize_float(&mut self, key: impl Into<String>, value: f64) {
        self.summary.push((key.into(), format_float(value)));
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Tool name and version plus the current UTC time.
    pub fn stamp(&mut self) {
        self.meta("tool", format!("sphlab {}", env!("CARGO_PKG_VERSION")));
        self.meta(
            TIMESTAMP_KEY,
            chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        );
    }

    pub fn render(&self) -> Result<String, ReportError> {
        let mut out = String::new();
        writeln!(
            out,
            "# schema: {SCHEMA_PREFIX}{FORMAT_VERSION} {}",
            self.kind
        )
        .unwrap();
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {}", one_line(v)).unwrap();
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render))?;
        }
        let body = w
            .into_inner()
            .map_err(|e| ReportError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| ReportError::Malformed(e.to_string()))?);
        out.push_str("# summary\n");
        for (k, v) in &self.summary {
            writeln!(out, "# {k}: {}", one_line(v)).unwrap();
        }
        Ok(out)
    }

    pub fn write_to(&self, path: &Path) -> Result<(), ReportError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.render()?)?;
        Ok(())
    }

    /// Parses a rendered report. Cells come back as text.
    pub fn parse(text: &str) -> Result<Self, ReportError> {
        let mut lines = text.lines();
        let schema = lines
            .next()
            .and_then(|l| l.strip_prefix("# schema: "))
            .ok_or(ReportError::MissingSchema)?;
        let (tag, kind) = schema.split_once(' ').unwrap_or((schema, ""));
        if tag != format!("{SCHEMA_PREFIX}{FORMAT_VERSION}") {
            return Err(ReportError::UnknownVersion(tag.to_string()));
        }
        let mut meta = Vec::new();
        let mut summary = Vec::new();
        let mut body = String::new();
        let mut in_summary = false;
        for line in lines {
            if line == "# summary" {
                in_summary = true;
            } else if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv
                    .split_once(": ")
                    .ok_or_else(|| ReportError::Malformed(format!("bad comment line {line:?}")))?;
                let target = if in_summary { &mut summary } else { &mut meta };
                target.push((k.to_string(), v.to_string()));
            } else if in_summary {
                return Err(ReportError::Malformed("data after summary".into()));
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(
                rec?.iter()
                    .map(|s| {
                        if s.is_empty() {
                            Value::Empty
                        } else {
                            Value::Text(s.to_string())
                        }
                    })
                    .collect(),
            );
        }
        Ok(Self {
            kind: kind.to_string(),
            meta,
            columns,
            rows,
            summary,
        })
    }

    pub fn read_from(path: &Path) -> Result<Self, ReportError> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

/// The rendered text with the timestamp line removed, for comparing runs.
pub fn without_timestamp(text: &str) -> String {
    let prefix = format!("# {TIMESTAMP_KEY}: ");
    text.lines()
        .filter(|l| !l.starts_with(&prefix))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("kernel", &["n", "gamma", "regime", "note"]);
        r.meta("config", "{\"dim\":2}");
        r.push_row(vec![
            1usize.into(),
            0.1.into(),
            "interior".into(),
            Value::Empty,
        ]);
        r.push_row(vec![
            2usize.into(),
            (-1.0 / 3.0).into(),
            "global".into(),
            "a,\"quoted\" cell".into(),
        ]);
        r.summarize_float("slope", 0.5);
        r.summarize("status", "PASS");
        r
    }

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
        assert_eq!(format_float(-1.0 / 3.0), "-3.3333333333333331e-1");
        let x = 0.1 + 0.2;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn render_and_parse() {
        let r = sample();
        let text = r.render().unwrap();
        assert!(text.starts_with("# schema: sphlab-report/1 kernel\n"));
        assert!(text.contains("\"a,\"\"quoted\"\" cell\""));
        let back = Report::parse(&text).unwrap();
        assert_eq!(back.kind, "kernel");
        assert_eq!(back.columns, r.columns);
        assert_eq!(back.rows.len(), 2);
        assert_eq!(back.rows[1][3], Value::Text("a,\"quoted\" cell".into()));
        assert_eq!(back.rows[0][3], Value::Empty);
        assert_eq!(back.summary_value("status"), Some("PASS"));
        assert_eq!(back.meta, r.meta);
        assert_eq!(back.render().unwrap().lines().count(), text.lines().count());
    }

    #[test]
    fn rejects_unknown_versions() {
        let text = sample()
            .render()
            .unwrap()
            .replacen("sphlab-report/1", "sphlab-report/2", 1);
        assert!(
            matches!(Report::parse(&text), Err(ReportError::UnknownVersion(v)) if v == "sphlab-report/2")
        );
        assert!(matches!(
            Report::parse("n,gamma\n1,2\n"),
            Err(ReportError::MissingSchema)
        ));
    }

    #[test]
    fn timestamp_is_the_only_varying_line() {
        let mut a = sample();
        a.stamp();
        let mut b = sample();
        b.stamp();
        b.meta
            .iter_mut()
            .find(|(k, _)| k == TIMESTAMP_KEY)
            .unwrap()
            .1 = "1999-01-01T00:00:00Z".into();
        let (ta, tb) = (a.render().unwrap(), b.render().unwrap());
        assert_ne!(ta, tb);
        assert_eq!(without_timestamp(&ta), without_timestamp(&tb));
    }
}
