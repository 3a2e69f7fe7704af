//! CSV rendering shared by all commands.
//!
//! Every document starts with one `#` metadata line, then a header row,
//! then data rows. Trailing `#` lines carry summaries.

use clap::ValueEnum;

use ubb_core::BitRate;

use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Precision {
    /// Mbit/s with one decimal, ratios with six.
    #[default]
    Table,
    /// Bits per second and ratios at full round-trip precision.
    Full,
}

impl Precision {
    pub fn rate(self, rate: BitRate) -> String {
        match self {
            Precision::Table => format!("{:.1}", rate.mbps()),
            Precision::Full => format!("{}", rate.bps()),
        }
    }

    pub fn rate_column(self, stem: &str) -> String {
        match self {
            Precision::Table => format!("{stem}_mbps"),
            Precision::Full => format!("{stem}_bps"),
        }
    }

    pub fn ratio(self, x: f64) -> String {
        match self {
            Precision::Table => format!("{x:.6}"),
            Precision::Full => format!("{x}"),
        }
    }

    pub fn millis(self, ms: f64) -> String {
        match self {
            Precision::Table => format!("{ms:.3}"),
            Precision::Full => format!("{ms}"),
        }
    }
}

pub struct CsvDoc {
    buf: Vec<u8>,
    columns: Option<usize>,
}

impl CsvDoc {
    pub fn new(command: &str, scenario_hash: Option<&str>) -> Self {
        let buf = format!(
            "# ubb-plan {command} version={VERSION} scenario={}\n",
            scenario_hash.unwrap_or("none")
        )
        .into_bytes();
        Self { buf, columns: None }
    }

    /// Appends one record; all records must have the header's width.
    pub fn record<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let record: csv::ByteRecord = fields.into_iter().collect();
        match self.columns {
            None => self.columns = Some(record.len()),
            Some(n) if n != record.len() => {
                return Err(CliError::Io(format!(
                    "csv: record has {} fields, header {n}",
                    record.len()
                )))
            }
            Some(_) => {}
        }
        let mut w = csv::Writer::from_writer(&mut self.buf);
        w.write_byte_record(&record)
            .and_then(|_| w.flush().map_err(Into::into))
            .map_err(|e| CliError::Io(format!("csv: {e}")))
    }

    pub fn comment(&mut self, line: &str) -> Result<()> {
        self.buf.extend_from_slice(b"# ");
        self.buf.extend_from_slice(line.as_bytes());
        self.buf.push(b'\n');
        Ok(())
    }

    pub fn finish(self) -> Result<String> {
        String::from_utf8(self.buf).map_err(|e| CliError::Io(e.to_string()))
    }
}
