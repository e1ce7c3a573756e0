use std::io::Write;
use std::path::Path;

use mst_core::json::complex_to_json;
use mst_core::{RationalFn, C64};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One pass/fail decision reported by a command.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Verdict {
    pub fn below(check: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Long-form matrix rows `prefix.., row, col, re, im`.
    pub fn push_matrix(&mut self, prefix: &[&str], m: &DMatrix<C64>) {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let mut row: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
                row.extend([
                    i.to_string(),
                    j.to_string(),
                    m[(i, j)].re.to_string(),
                    m[(i, j)].im.to_string(),
                ]);
                self.push(row);
            }
        }
    }

    /// Coefficient rows `prefix.., field, power, re, im` for numerator and denominator.
    pub fn push_rational(&mut self, prefix: &[&str], f: &RationalFn) {
        for (field, p) in [("num", f.num()), ("den", f.den())] {
            for (k, c) in p.coeffs().iter().enumerate() {
                let mut row: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
                row.extend([
                    field.to_string(),
                    k.to_string(),
                    c.re.to_string(),
                    c.im.to_string(),
                ]);
                self.push(row);
            }
        }
    }

    pub fn verdicts(verdicts: &[Verdict]) -> Self {
        let mut t = Table::new(&["check", "residual", "tolerance", "passed"]);
        for v in verdicts {
            t.push(vec![
                v.check.clone(),
                v.residual.to_string(),
                v.tolerance.to_string(),
                v.passed.to_string(),
            ]);
        }
        t
    }
}

/// What a command produced: the JSON document, its CSV table, and the checks
/// that decide the exit code.
pub struct Outcome {
    pub json: Value,
    pub table: Table,
    pub verdicts: Vec<Verdict>,
}

pub fn matrix_json(m: &DMatrix<C64>) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect())
        .collect();
    serde_json::json!({ "rows": m.nrows(), "cols": m.ncols(), "entries": rows })
}

pub fn render(outcome: &Outcome, format: Format) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&outcome.json).map_err(|e| e.to_string())?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&outcome.table.header)
                .map_err(|e| e.to_string())?;
            for row in &outcome.table.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            w.into_inner().map_err(|e| e.to_string())
        }
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| e.to_string()),
    }
}
