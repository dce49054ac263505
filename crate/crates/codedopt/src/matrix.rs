//! Minimal dense row-major matrix used by the bundled objectives and
//! fixtures. One plain type keeps the numeric kernels obvious and the CSV
//! on-disk format trivial (one row per line, comma-separated decimals).

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Dense row-major `rows x cols` matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data; `data.len()` must equal
    /// `rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Borrow row `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// `A * x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "matvec: {}x{} matrix against length-{} vector",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A^T * y`.
    pub fn t_matvec(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows {
            return Err(Error::Shape(format!(
                "t_matvec: {}x{} matrix against length-{} vector",
                self.rows,
                self.cols,
                y.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        Ok(out)
    }

    /// Parses a CSV matrix: one row per line, comma-separated decimal
    /// floats, every row the same width. Blank lines are ignored.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut data = Vec::new();
        let mut cols = None;
        let mut rows = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut width = 0;
            for field in line.split(',') {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::Parse(format!("line {}: bad float {field:?}", lineno + 1))
                })?;
                data.push(v);
                width += 1;
            }
            match cols {
                None => cols = Some(width),
                Some(c) if c != width => {
                    return Err(Error::Parse(format!(
                        "line {}: expected {c} columns, got {width}",
                        lineno + 1
                    )))
                }
                _ => {}
            }
            rows += 1;
        }
        if rows == 0 {
            return Err(Error::Parse("empty CSV matrix".into()));
        }
        Self::from_rows(rows, cols.unwrap(), data)
    }

    /// Reads a CSV matrix file (see [`Matrix::from_csv_str`]).
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    /// Renders the matrix as CSV with round-trip float formatting.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Parses a vector stored as a single-column or single-row CSV file.
pub fn vector_from_csv_str(text: &str) -> Result<Vec<f64>> {
    let m = Matrix::from_csv_str(text)?;
    if m.rows() != 1 && m.cols() != 1 {
        return Err(Error::Parse(format!(
            "expected a vector, got a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.data)
}

/// Reads a vector from a CSV file (see [`vector_from_csv_str`]).
pub fn vector_from_csv_path(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    vector_from_csv_str(&std::fs::read_to_string(path)?)
}

/// Renders a vector as a single CSV row.
pub fn vector_to_csv_string(v: &[f64]) -> String {
    let mut out = String::new();
    for (j, x) in v.iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x}");
    }
    out.push('\n');
    out
}
