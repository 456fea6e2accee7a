//! Shared CSV ingestion plumbing: header lookup, row rejects, date parsing.

use std::collections::HashMap;
use std::io::{Read, Write};

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{source_name}: missing required column `{column}`")]
    MissingColumn {
        source_name: &'static str,
        column: &'static str,
    },
    #[error("{source_name}: {error}")]
    Csv {
        source_name: &'static str,
        #[source]
        error: csv::Error,
    },
}

/// One rejected input row. `row_number` is 1-based over data rows (the header
/// row is not counted).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub row_number: usize,
    pub reason: String,
}

/// Accepted records plus the rows that failed validation.
#[derive(Debug, Clone)]
pub struct Ingested<T> {
    pub records: Vec<T>,
    pub rejects: Vec<Reject>,
}

impl<T> Ingested<T> {
    pub fn new() -> Self {
        Self {
            records: Vec::new(),
            rejects: Vec::new(),
        }
    }

    pub fn reject(&mut self, row_number: usize, reason: impl Into<String>) {
        self.rejects.push(Reject {
            row_number,
            reason: reason.into(),
        });
    }
}

impl<T> Default for Ingested<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Writes a rejects report as `row_number,reason` CSV.
pub fn write_rejects<W: Write>(writer: W, rejects: &[Reject]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["row_number", "reason"])?;
    for r in rejects {
        w.write_record([r.row_number.to_string(), r.reason.clone()])?;
    }
    w.flush()?;
    Ok(())
}

/// Header-indexed CSV reader that tolerates ragged rows so they can be
/// rejected individually instead of aborting the whole file.
pub(crate) struct CsvTable<R: Read> {
    source_name: &'static str,
    reader: csv::Reader<R>,
    columns: HashMap<String, usize>,
}

impl<R: Read> CsvTable<R> {
    pub(crate) fn open(source: R, source_name: &'static str) -> Result<Self, IngestError> {
        let mut reader = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::Headers)
            .from_reader(source);
        let headers = reader
            .headers()
            .map_err(|error| IngestError::Csv { source_name, error })?;
        let columns = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim_start_matches('\u{feff}').to_ascii_lowercase(), i))
            .collect();
        Ok(Self {
            source_name,
            reader,
            columns,
        })
    }

    pub(crate) fn require(&self, column: &'static str) -> Result<usize, IngestError> {
        self.columns
            .get(column)
            .copied()
            .ok_or(IngestError::MissingColumn {
                source_name: self.source_name,
                column,
            })
    }

    pub(crate) fn optional(&self, column: &str) -> Option<usize> {
        self.columns.get(column).copied()
    }

    /// Iterates `(row_number, record)`; malformed CSV records surface as
    /// `Err((row_number, message))`.
    pub(crate) fn rows(
        &mut self,
    ) -> impl Iterator<Item = Result<(usize, csv::StringRecord), (usize, String)>> + '_ {
        self.reader
            .records()
            .enumerate()
            .map(|(i, rec)| rec.map(|r| (i + 1, r)).map_err(|e| (i + 1, e.to_string())))
    }
}

pub(crate) fn field<'r>(
    record: &'r csv::StringRecord,
    index: usize,
    name: &str,
) -> Result<&'r str, String> {
    record
        .get(index)
        .map(str::trim)
        .ok_or_else(|| format!("missing field `{name}`"))
}

/// Parses a `YYYY-MM-DD` calendar date.
pub fn parse_date(s: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").map_err(|e| format!("bad date `{s}`: {e}"))
}

/// Parses an ISO-8601 timestamp and normalises it to UTC.
///
/// Accepts RFC 3339, `YYYY-MM-DD HH:MM:SS[.f][±HH:MM]`, offset-less forms
/// (taken as UTC) and bare dates (midnight UTC).
pub fn parse_timestamp(s: &str) -> Result<DateTime<Utc>, String> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Ok(t.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%d %H:%M:%S%.f%:z", "%Y-%m-%d %H:%M:%S%.f%z"] {
        if let Ok(t) = DateTime::parse_from_str(s, fmt) {
            return Ok(t.with_timezone(&Utc));
        }
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(t.and_utc());
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(d.and_hms_opt(0, 0, 0).expect("midnight").and_utc());
    }
    Err(format!("unparseable timestamp `{s}`"))
}

/// Parses a finite float.
pub(crate) fn parse_f64(s: &str, name: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(format!("non-finite {name} `{s}`")),
        Err(_) => Err(format!("non-numeric {name} `{s}`")),
    }
}
