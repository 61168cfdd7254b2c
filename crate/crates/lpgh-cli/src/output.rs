//! Report assembly and serialization.
//!
//! Every subcommand produces one [`Report`]: a resolved-config echo, a
//! rectangular table, an optional summary, and optional free-form notes.
//! Reports render to CSV with `#`-prefixed header lines or to a single
//! JSON document, always through the same path, so the two formats agree
//! on content and the bytes are a pure function of the resolved config.
//!
//! Floats are serialized with 17 significant digits (`{:.16e}`), enough to
//! round-trip any 64-bit value exactly; JSON output preserves that exact
//! literal through `serde_json`'s arbitrary-precision numbers.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_bigint::BigUint;

use crate::config::OutputFormat;

/// One value in a report: a config entry, a table cell, or a summary entry.
#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    U(u64),
    I(i64),
    Big(BigUint),
    S(String),
    B(bool),
    FSeq(Vec<f64>),
    USeq(Vec<u64>),
}

impl Cell {
    fn render(&self) -> Result<String, CliError> {
        match self {
            Cell::F(v) => float_literal(*v),
            Cell::U(v) => Ok(v.to_string()),
            Cell::I(v) => Ok(v.to_string()),
            Cell::Big(v) => Ok(v.to_str_radix(10)),
            Cell::S(v) => Ok(v.clone()),
            Cell::B(v) => Ok(v.to_string()),
            Cell::FSeq(vs) => {
                let parts: Result<Vec<_>, _> = vs.iter().map(|v| float_literal(*v)).collect();
                Ok(parts?.join(","))
            }
            Cell::USeq(vs) => Ok(vs
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")),
        }
    }

    fn to_json(&self) -> Result<serde_json::Value, CliError> {
        let number = |text: String| -> Result<serde_json::Value, CliError> {
            let n: serde_json::Number = serde_json::from_str(&text)
                .map_err(|e| CliError::Invariant(format!("unserializable number {text}: {e}")))?;
            Ok(serde_json::Value::Number(n))
        };
        match self {
            Cell::F(v) => number(float_literal(*v)?),
            Cell::U(v) => Ok(serde_json::Value::from(*v)),
            Cell::I(v) => Ok(serde_json::Value::from(*v)),
            Cell::Big(v) => number(v.to_str_radix(10)),
            Cell::S(v) => Ok(serde_json::Value::String(v.clone())),
            Cell::B(v) => Ok(serde_json::Value::Bool(*v)),
            Cell::FSeq(vs) => {
                let items: Result<Vec<_>, _> =
                    vs.iter().map(|v| number(float_literal(*v)?)).collect();
                Ok(serde_json::Value::Array(items?))
            }
            Cell::USeq(vs) => Ok(serde_json::Value::Array(
                vs.iter().map(|&v| serde_json::Value::from(v)).collect(),
            )),
        }
    }
}

fn float_literal(v: f64) -> Result<String, CliError> {
    if !v.is_finite() {
        return Err(CliError::Invariant(format!(
            "non-finite value {v} reached serialization"
        )));
    }
    Ok(format!("{v:.16e}"))
}

/// Everything one subcommand run wants to say.
#[derive(Debug)]
pub struct Report {
    pub subcommand: &'static str,
    pub config: Vec<(&'static str, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(subcommand: &'static str) -> Self {
        Report {
            subcommand,
            config: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            summary: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn render_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        let _ = writeln!(out, "# lpgh {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# subcommand: {}", self.subcommand);
        let mut config: Vec<_> = self.config.iter().collect();
        config.sort_by_key(|(k, _)| *k);
        for (key, cell) in config {
            let _ = writeln!(out, "# config {key}: {}", cell.render()?);
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let rendered: Result<Vec<_>, _> = row.iter().map(Cell::render).collect();
            out.push_str(&rendered?.join(","));
            out.push('\n');
        }
        for note in &self.notes {
            for line in note.lines() {
                let _ = writeln!(out, "# note: {line}");
            }
        }
        if !self.summary.is_empty() {
            let parts: Result<Vec<_>, _> = self
                .summary
                .iter()
                .map(|(k, c)| Ok(format!("{k}={}", c.render()?)))
                .collect::<Result<_, CliError>>();
            let _ = writeln!(out, "# summary: {}", parts?.join(" "));
        }
        Ok(out)
    }

    fn render_json(&self) -> Result<String, CliError> {
        let mut config = serde_json::Map::new();
        config.insert(
            "artifact".into(),
            serde_json::Value::String(format!("lpgh {}", env!("CARGO_PKG_VERSION"))),
        );
        config.insert(
            "subcommand".into(),
            serde_json::Value::String(self.subcommand.into()),
        );
        for (key, cell) in &self.config {
            config.insert((*key).into(), cell.to_json()?);
        }
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut obj = serde_json::Map::new();
            for (name, cell) in self.columns.iter().zip(row) {
                obj.insert(name.clone(), cell.to_json()?);
            }
            rows.push(serde_json::Value::Object(obj));
        }
        let mut doc = serde_json::Map::new();
        doc.insert("config".into(), serde_json::Value::Object(config));
        doc.insert("rows".into(), serde_json::Value::Array(rows));
        if !self.summary.is_empty() {
            let mut summary = serde_json::Map::new();
            for (key, cell) in &self.summary {
                summary.insert((*key).into(), cell.to_json()?);
            }
            doc.insert("summary".into(), serde_json::Value::Object(summary));
        }
        if !self.notes.is_empty() {
            doc.insert(
                "notes".into(),
                serde_json::Value::Array(
                    self.notes
                        .iter()
                        .map(|n| serde_json::Value::String(n.clone()))
                        .collect(),
                ),
            );
        }
        let body = serde_json::to_string_pretty(&serde_json::Value::Object(doc))
            .map_err(|e| CliError::Invariant(format!("json serialization failed: {e}")))?;
        Ok(body + "\n")
    }

    /// Renders and delivers the report: to stdout, or atomically to a file
    /// (temp file in the target directory, then rename).
    pub fn emit(&self, format: OutputFormat, out: Option<&Path>) -> Result<(), CliError> {
        let body = match format {
            OutputFormat::Csv => self.render_csv()?,
            OutputFormat::Json => self.render_json()?,
        };
        match out {
            None => {
                print!("{body}");
                Ok(())
            }
            Some(path) => {
                let parent = match path.parent() {
                    Some(p) if !p.as_os_str().is_empty() => p,
                    _ => Path::new("."),
                };
                let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(io_error)?;
                tmp.write_all(body.as_bytes()).map_err(io_error)?;
                tmp.persist(path).map_err(|e| io_error(e.error))?;
                Ok(())
            }
        }
    }
}

/// A run outcome the process must report through its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments outside an operation's domain.
    Usage(String),
    /// A claimed mathematical invariant failed, which would falsify the
    /// implementation rather than the input.
    Invariant(String),
    /// Output could not be delivered.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invariant(m) | CliError::Io(m) => m,
        }
    }
}

pub fn io_error(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Maps library errors onto exit statuses: audit and consistency failures
/// are invariant violations, everything else is a domain problem with the
/// requested run.
pub fn classify(err: lpgh::Error) -> CliError {
    match err {
        lpgh::Error::MetricAxiom { .. } | lpgh::Error::Consistency { .. } => {
            CliError::Invariant(err.to_string())
        }
        _ => CliError::Usage(err.to_string()),
    }
}
