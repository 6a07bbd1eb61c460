//! CSV and JSON-lines writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

/// Shortest decimal form that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub struct CsvWriter<W: Write> {
    out: W,
    columns: usize,
}

impl CsvWriter<BufWriter<File>> {
    pub fn create(path: &Path, header: &[String]) -> io::Result<Self> {
        CsvWriter::new(BufWriter::new(File::create(path)?), header)
    }
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, header: &[String]) -> io::Result<Self> {
        writeln!(out, "{}", header.join(","))?;
        Ok(CsvWriter {
            out,
            columns: header.len(),
        })
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        debug_assert_eq!(fields.len(), self.columns);
        writeln!(self.out, "{}", fields.join(","))
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Header `sample_id,t,x1..xd,n_jumps,gamma`.
pub fn sample_header(d: usize) -> Vec<String> {
    let mut h = vec!["sample_id".to_string(), "t".to_string()];
    h.extend((1..=d).map(|i| format!("x{i}")));
    h.push("n_jumps".to_string());
    h.push("gamma".to_string());
    h
}

pub fn sample_row(id: usize, t: f64, x: &[f64], n_jumps: u64, gamma: f64) -> Vec<String> {
    let mut r = Vec::with_capacity(x.len() + 4);
    r.push(id.to_string());
    r.push(fmt_f64(t));
    r.extend(x.iter().map(|&v| fmt_f64(v)));
    r.push(n_jumps.to_string());
    r.push(fmt_f64(gamma));
    r
}

pub fn write_json_lines<T: Serialize>(path: &Path, records: &[T]) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
