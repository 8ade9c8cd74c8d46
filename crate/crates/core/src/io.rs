//! Flat-file input and output.
//!
//! Series are read from delimited text (RFC 4180 quoting, UTF-8). Tables are
//! written as CSV with a header row, `NA` for missing cells and reals printed
//! with 17 significant digits, or as JSON.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const MISSING_TOKEN: &str = "NA";

/// Relative tolerance on the time increment when validating the grid.
pub const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    /// Zero-based position.
    Index(usize),
}

impl ColumnRef {
    /// Digits are read as an index, anything else as a header name.
    pub fn parse(s: &str) -> ColumnRef {
        match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        }
    }

    fn resolve(&self, headers: Option<&csv::StringRecord>, width: usize) -> Result<usize> {
        let idx = match (self, headers) {
            (ColumnRef::Index(i), _) => Some(*i),
            (ColumnRef::Name(name), Some(h)) => h.iter().position(|c| c.trim() == name),
            (ColumnRef::Name(name), None) => {
                return Err(Error::domain(format!(
                    "column {name:?} referenced by name but the file has no header"
                )))
            }
        };
        match idx {
            Some(i) if i < width => Ok(i),
            _ => Err(Error::domain(format!("column {self:?} not found"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec {
    pub time_column: Option<ColumnRef>,
    /// `None` selects the last column.
    pub value_column: Option<ColumnRef>,
    pub missing_tokens: Vec<String>,
    pub delimiter: u8,
    pub header: bool,
}

impl Default for ColumnSpec {
    fn default() -> Self {
        ColumnSpec {
            time_column: None,
            value_column: None,
            missing_tokens: vec![String::new(), "NA".into(), "NaN".into()],
            delimiter: b',',
            header: true,
        }
    }
}

impl ColumnSpec {
    fn validate(&self) -> Result<()> {
        if self.delimiter == b'"' {
            return Err(Error::domain("delimiter cannot be the quote character"));
        }
        Ok(())
    }

    fn is_missing(&self, field: &str) -> bool {
        self.missing_tokens.iter().any(|t| t == field)
    }
}

/// Reads one value column as a [`TimeSeries`], in file order.
///
/// With a time column the grid must be uniform; its increment becomes the
/// series' time step. Nothing is resampled.
pub fn read_timeseries(path: impl AsRef<Path>, spec: &ColumnSpec) -> Result<TimeSeries> {
    let path = path.as_ref();
    spec.validate()?;
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(spec.header)
        .from_reader(file);
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let headers = if spec.header {
        Some(reader.headers().map_err(csv_err)?.clone())
    } else {
        None
    };

    let mut samples = Vec::new();
    let mut times = Vec::new();
    let mut columns: Option<(usize, Option<usize>)> = None;
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let (value_idx, time_idx) = match columns {
            Some(c) => c,
            None => {
                let width = record.len();
                let value_idx = match &spec.value_column {
                    Some(c) => c.resolve(headers.as_ref(), width)?,
                    None => width - 1,
                };
                let time_idx = spec
                    .time_column
                    .as_ref()
                    .map(|c| c.resolve(headers.as_ref(), width))
                    .transpose()?;
                *columns.insert((value_idx, time_idx))
            }
        };

        let field = record[value_idx].trim();
        if spec.is_missing(field) {
            samples.push(None);
        } else {
            samples.push(Some(parse_finite(field, line)?));
        }
        if let Some(ti) = time_idx {
            times.push(parse_finite(record[ti].trim(), line)?);
        }
    }
    if samples.is_empty() {
        return Err(Error::Empty(path.to_path_buf()));
    }

    let series = TimeSeries::from_options(&samples)?;
    if times.len() >= 2 {
        let step = check_uniform_grid(&times)?;
        return series.with_time_step(step);
    }
    Ok(series)
}

fn parse_finite(field: &str, line: u64) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            line,
            message: format!("{field:?} is not a finite number"),
        }),
    }
}

/// Returns the increment. Rows are reported 1-based, counting data rows only.
fn check_uniform_grid(times: &[f64]) -> Result<f64> {
    let step = times[1] - times[0];
    if step.is_nan() || step <= 0.0 {
        return Err(Error::NonUniformGrid {
            row: 2,
            message: format!("time must increase, got {} then {}", times[0], times[1]),
        });
    }
    for (i, pair) in times.windows(2).enumerate().skip(1) {
        let d = pair[1] - pair[0];
        if (d - step).abs() > GRID_TOLERANCE * step {
            return Err(Error::NonUniformGrid {
                row: i + 2,
                message: format!("increment {d} differs from {step}"),
            });
        }
    }
    Ok(step)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Integer(Vec<i64>),
    Real(Vec<Option<f64>>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Integer(v) => v.len(),
            ColumnData::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
}

impl Table {
    pub fn new() -> Self {
        Table::default()
    }

    pub fn with_integers(mut self, name: impl Into<String>, values: Vec<i64>) -> Self {
        self.columns.push(Column {
            name: name.into(),
            data: ColumnData::Integer(values),
        });
        self
    }

    pub fn with_reals(mut self, name: impl Into<String>, values: Vec<f64>) -> Self {
        self.columns.push(Column {
            name: name.into(),
            data: ColumnData::Real(values.into_iter().map(Some).collect()),
        });
        self
    }

    pub fn with_optional(mut self, name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        self.columns.push(Column {
            name: name.into(),
            data: ColumnData::Real(values),
        });
        self
    }

    /// Row count; fails if columns disagree.
    pub fn rows(&self) -> Result<usize> {
        let n = self.columns.first().map_or(0, |c| c.data.len());
        if let Some(bad) = self.columns.iter().find(|c| c.data.len() != n) {
            return Err(Error::domain(format!(
                "column {:?} has {} rows, expected {n}",
                bad.name,
                bad.data.len()
            )));
        }
        Ok(n)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// 17 significant digits; parses back to the same double.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_table(path: impl AsRef<Path>, table: &Table) -> Result<()> {
    write_table_as(path, table, Format::Csv)
}

pub fn write_table_as(path: impl AsRef<Path>, table: &Table, format: Format) -> Result<()> {
    let path = path.as_ref();
    table.rows()?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_table_to(&mut out, table, format).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Serializes `table` to any writer. Column lengths must already agree.
pub fn write_table_to<W: Write + ?Sized>(out: &mut W, table: &Table, format: Format) -> std::io::Result<()> {
    let rows = table
        .rows()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.to_string()))?;
    match format {
        Format::Csv => write_csv(out, table, rows),
        Format::Json => {
            serde_json::to_writer(&mut *out, &table_json(table))?;
            writeln!(out)
        }
    }
}

fn write_csv<W: Write + ?Sized>(out: &mut W, table: &Table, rows: usize) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(table.columns.iter().map(|c| c.name.as_str()))?;
    let mut record = Vec::with_capacity(table.columns.len());
    for r in 0..rows {
        record.clear();
        for c in &table.columns {
            record.push(match &c.data {
                ColumnData::Integer(v) => v[r].to_string(),
                ColumnData::Real(v) => v[r].map_or_else(|| MISSING_TOKEN.to_string(), format_real),
            });
        }
        w.write_record(&record)?;
    }
    w.flush()
}

pub(crate) fn table_json(table: &Table) -> serde_json::Value {
    let columns: Vec<serde_json::Value> = table
        .columns
        .iter()
        .map(|c| {
            let values = match &c.data {
                ColumnData::Integer(v) => serde_json::json!(v),
                ColumnData::Real(v) => serde_json::json!(v),
            };
            serde_json::json!({ "name": c.name, "values": values })
        })
        .collect();
    serde_json::json!({ "columns": columns })
}
