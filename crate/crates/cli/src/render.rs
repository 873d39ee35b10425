use serde::Serialize;

use crate::config::Format;
use crate::CliError;

/// A flat table for CSV output.
pub struct Rows {
    pub header: Vec<String>,
    pub body: Vec<Vec<String>>,
}

impl Rows {
    pub fn new(header: &[&str], body: Vec<Vec<String>>) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), body }
    }
}

/// A command result in the three output formats.
pub trait Render: Serialize {
    fn rows(&self) -> Rows;
    fn pretty(&self) -> String;
    fn passed(&self) -> bool;

    fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => {
                let rows = self.rows();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&rows.header)?;
                for r in &rows.body {
                    w.write_record(r)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
            }
            Format::Pretty => Ok(self.pretty()),
        }
    }
}

/// Left-aligned columns.
pub fn align(rows: &Rows) -> String {
    let all: Vec<&Vec<String>> = std::iter::once(&rows.header).chain(&rows.body).collect();
    let widths: Vec<usize> =
        (0..rows.header.len()).map(|i| all.iter().map(|r| r.get(i).map_or(0, |c| c.len())).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in all {
        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out += line.join("  ").trim_end();
        out.push('\n');
    }
    out
}
