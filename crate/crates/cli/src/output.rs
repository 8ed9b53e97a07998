//! The single writer every subcommand reports through.

use std::io::{self, Write};

use serde::Serialize;

use crate::args::Format;

/// Rows go out as JSON lines, CSV records, or an aligned text table. The
/// trailing summary is a final JSON line in JSON mode and goes to stderr
/// otherwise, so CSV output stays machine-readable.
pub struct Sink {
    format: Format,
    out: Box<dyn Write>,
    header: Vec<String>,
    header_written: bool,
    table: Vec<Vec<String>>,
}

impl Sink {
    pub fn new(format: Format, out: Box<dyn Write>, header: &[&str]) -> Self {
        Sink {
            format,
            out,
            header: header.iter().map(|s| s.to_string()).collect(),
            header_written: false,
            table: Vec::new(),
        }
    }

    fn csv_header(&mut self) -> io::Result<()> {
        if self.format == Format::Csv && !self.header_written {
            self.out.write_all(&csv_record(&self.header)?)?;
            self.header_written = true;
        }
        Ok(())
    }

    pub fn row(&mut self, json: &impl Serialize, cells: Vec<String>) -> io::Result<()> {
        match self.format {
            Format::Json => {
                serde_json::to_writer(&mut self.out, json)?;
                self.out.write_all(b"\n")
            }
            Format::Csv => {
                self.csv_header()?;
                self.out.write_all(&csv_record(&cells)?)
            }
            Format::Table => {
                self.table.push(cells);
                Ok(())
            }
        }
    }

    /// Writes a whole JSON document regardless of the row format.
    pub fn document(&mut self, json: &impl Serialize) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut self.out, json)?;
        self.out.write_all(b"\n")
    }

    pub fn finish(mut self, summary: Option<(&impl Serialize, String)>) -> io::Result<()> {
        match self.format {
            Format::Csv => self.csv_header()?,
            Format::Table => {
                let table = render_table(&self.header, &self.table);
                self.out.write_all(table.as_bytes())?;
            }
            Format::Json => {}
        }
        if let Some((json, text)) = summary {
            if self.format == Format::Json {
                serde_json::to_writer(&mut self.out, json)?;
                self.out.write_all(b"\n")?;
            } else {
                eprintln!("{text}");
            }
        }
        self.out.flush()
    }
}

fn csv_record(cells: &[String]) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cells)?;
    w.into_inner().map_err(|e| e.into_error())
}

pub fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out += &line(&rule);
    for row in rows {
        out += &line(row);
    }
    out
}

pub fn join(xs: impl IntoIterator<Item = impl ToString>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
