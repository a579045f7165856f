//! JSON and CSV writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::config::{ConfigError, Format};
use super::record::ResultRecord;
use crate::verify::Report;

fn io_err(e: impl std::fmt::Display) -> ConfigError {
    ConfigError::Write(e.to_string())
}

/// Calls `f` with a buffered writer on `path`, or on stdout.
pub(crate) fn with_sink<T>(
    path: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> Result<T, ConfigError>,
) -> Result<T, ConfigError> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| ConfigError::Write(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            let v = f(&mut w)?;
            w.flush().map_err(io_err)?;
            Ok(v)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            let v = f(&mut w)?;
            w.flush().map_err(io_err)?;
            Ok(v)
        }
    }
}

/// Incremental writer so that sweep rows reach the file as they finish.
pub(crate) struct RecordStream<'w> {
    out: &'w mut dyn Write,
    format: Format,
    written: usize,
}

impl<'w> RecordStream<'w> {
    pub(crate) fn new(out: &'w mut dyn Write, format: Format) -> Self {
        Self { out, format, written: 0 }
    }

    pub(crate) fn push(&mut self, record: &ResultRecord) -> Result<(), ConfigError> {
        match self.format {
            Format::Json => {
                let sep = if self.written == 0 { "[\n" } else { ",\n" };
                let body = serde_json::to_string(record).map_err(io_err)?;
                write!(self.out, "{sep}{body}").map_err(io_err)?;
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().has_headers(self.written == 0).from_writer(Vec::new());
                w.serialize(record).map_err(io_err)?;
                let bytes = w.into_inner().map_err(io_err)?;
                self.out.write_all(&bytes).map_err(io_err)?;
            }
        }
        self.written += 1;
        Ok(())
    }

    pub(crate) fn flush(&mut self) -> Result<(), ConfigError> {
        self.out.flush().map_err(io_err)
    }

    pub(crate) fn finish(mut self) -> Result<(), ConfigError> {
        if self.format == Format::Json {
            let text = if self.written == 0 { "[]\n" } else { "\n]\n" };
            self.out.write_all(text.as_bytes()).map_err(io_err)?;
        }
        self.flush()
    }
}

/// Writes records as a JSON array (one record per line) or as CSV with a header.
pub fn write_records(out: &mut dyn Write, records: &[ResultRecord], format: Format) -> Result<(), ConfigError> {
    let mut stream = RecordStream::new(out, format);
    for r in records {
        stream.push(r)?;
    }
    stream.finish()
}

/// Writes a verification report: a JSON object, or one CSV row per check.
pub fn write_report(out: &mut dyn Write, report: &Report, format: Format) -> Result<(), ConfigError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report).map_err(io_err)?;
            writeln!(out).map_err(io_err)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for check in &report.checks {
                w.serialize(check).map_err(io_err)?;
            }
            w.flush().map_err(io_err)
        }
    }
}
