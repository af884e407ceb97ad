//! Uniform-grid functions on the line and the plane.
//!
//! A sample covers one cell `[origin + i*spacing, origin + (i+1)*spacing)`
//! and the represented function is the cell-constant extension of the
//! samples, equal to zero outside the window.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretized Lebesgue measure of a single cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCellMeasure {
    pub dim: u8,
    pub cell_measure: f64,
}

impl GridCellMeasure {
    pub fn new(dim: u8, spacing: f64) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not supported")));
        }
        check_spacing(spacing)?;
        Ok(Self { dim, cell_measure: spacing.powi(i32::from(dim)) })
    }
}

/// Common view of a grid function as a bag of cell values.
pub trait GridFunction {
    fn cell_values(&self) -> &[f64];
    fn measure(&self) -> GridCellMeasure;

    /// Essential supremum of the cell-constant extension.
    fn sup_norm(&self) -> f64 {
        self.cell_values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn check_spacing(spacing: f64) -> Result<()> {
    if spacing.is_finite() && spacing > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!("spacing must be positive and finite, got {spacing}")))
    }
}

fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidGrid("no samples".into()));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!("sample {i} is not finite")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction1D {
    origin: f64,
    spacing: f64,
    values: Vec<f64>,
}

impl SampledFunction1D {
    pub fn new(origin: f64, spacing: f64, values: Vec<f64>) -> Result<Self> {
        check_spacing(spacing)?;
        check_values(&values)?;
        if !origin.is_finite() {
            return Err(Error::InvalidGrid("origin is not finite".into()));
        }
        Ok(Self { origin, spacing, values })
    }

    pub fn zeros(origin: f64, spacing: f64, n: usize) -> Result<Self> {
        Self::new(origin, spacing, vec![0.0; n])
    }

    /// Samples `f` at the cell centers of an `n`-cell window.
    pub fn from_fn(origin: f64, spacing: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..n).map(|i| f(origin + (i as f64 + 0.5) * spacing)).collect();
        Self::new(origin, spacing, values)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Length of the window.
    pub fn width(&self) -> f64 {
        self.values.len() as f64 * self.spacing
    }

    /// Value of the cell-constant extension at `x` (zero off the window).
    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.origin) / self.spacing;
        if u < 0.0 {
            return 0.0;
        }
        self.values.get(u.floor() as usize).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * factor).collect(), ..self.clone() }
    }
}

impl GridFunction for SampledFunction1D {
    fn cell_values(&self) -> &[f64] {
        &self.values
    }

    fn measure(&self) -> GridCellMeasure {
        GridCellMeasure { dim: 1, cell_measure: self.spacing }
    }
}

/// Row-major samples: row `i` is the `i`-th y-cell, column `j` the `j`-th x-cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction2D {
    origin_x: f64,
    origin_y: f64,
    spacing: f64,
    ncols: usize,
    nrows: usize,
    values: Vec<f64>,
}

impl SampledFunction2D {
    pub fn new(
        origin_x: f64,
        origin_y: f64,
        spacing: f64,
        ncols: usize,
        nrows: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        check_spacing(spacing)?;
        check_values(&values)?;
        if ncols == 0 || nrows == 0 || values.len() != ncols * nrows {
            return Err(Error::InvalidGrid(format!(
                "{} samples do not fill a {ncols}x{nrows} array",
                values.len()
            )));
        }
        if !(origin_x.is_finite() && origin_y.is_finite()) {
            return Err(Error::InvalidGrid("origin is not finite".into()));
        }
        Ok(Self { origin_x, origin_y, spacing, ncols, nrows, values })
    }

    pub fn zeros(origin_x: f64, origin_y: f64, spacing: f64, ncols: usize, nrows: usize) -> Result<Self> {
        Self::new(origin_x, origin_y, spacing, ncols, nrows, vec![0.0; ncols * nrows])
    }

    /// Samples `f(x, y)` at cell centers.
    pub fn from_fn(
        origin_x: f64,
        origin_y: f64,
        spacing: f64,
        ncols: usize,
        nrows: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(ncols * nrows);
        for i in 0..nrows {
            let y = origin_y + (i as f64 + 0.5) * spacing;
            for j in 0..ncols {
                values.push(f(origin_x + (j as f64 + 0.5) * spacing, y));
            }
        }
        Self::new(origin_x, origin_y, spacing, ncols, nrows, values)
    }

    pub fn origin_x(&self) -> f64 {
        self.origin_x
    }

    pub fn origin_y(&self) -> f64 {
        self.origin_y
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    /// Zero-extended access by signed cell index.
    pub fn get_ext(&self, row: isize, col: isize) -> f64 {
        if row < 0 || col < 0 || row as usize >= self.nrows || col as usize >= self.ncols {
            0.0
        } else {
            self.values[row as usize * self.ncols + col as usize]
        }
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.ncols..(row + 1) * self.ncols]
    }

    /// The x-section `y -> f(x_j, y)` through column `column`.
    pub fn section_x(&self, column: usize) -> Result<SampledFunction1D> {
        if column >= self.ncols {
            return Err(Error::IndexOutOfRange { index: column, len: self.ncols });
        }
        let values = (0..self.nrows).map(|i| self.get(i, column)).collect();
        SampledFunction1D::new(self.origin_y, self.spacing, values)
    }

    /// The y-section `x -> f(x, y_i)` through row `row`.
    pub fn section_y(&self, row: usize) -> Result<SampledFunction1D> {
        if row >= self.nrows {
            return Err(Error::IndexOutOfRange { index: row, len: self.nrows });
        }
        SampledFunction1D::new(self.origin_x, self.spacing, self.row(row).to_vec())
    }

    /// The function `(x, y) -> f(y, x)`.
    pub fn transpose(&self) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.ncols {
            for i in 0..self.nrows {
                values.push(self.get(i, j));
            }
        }
        Self {
            origin_x: self.origin_y,
            origin_y: self.origin_x,
            spacing: self.spacing,
            ncols: self.nrows,
            nrows: self.ncols,
            values,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * factor).collect(), ..self.clone() }
    }

    /// Pointwise sum of two functions sampled on the same grid.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::InvalidGrid("grids differ".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.origin_x == other.origin_x
            && self.origin_y == other.origin_y
            && self.spacing == other.spacing
            && self.ncols == other.ncols
            && self.nrows == other.nrows
    }

    /// Splits every cell into `factor x factor` cells of the same value; the
    /// represented function is unchanged.
    pub fn subdivide(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidGrid("subdivision factor must be positive".into()));
        }
        let ncols = self.ncols * factor;
        let nrows = self.nrows * factor;
        let mut values = Vec::with_capacity(ncols * nrows);
        for i in 0..nrows {
            for j in 0..ncols {
                values.push(self.get(i / factor, j / factor));
            }
        }
        Self::new(self.origin_x, self.origin_y, self.spacing / factor as f64, ncols, nrows, values)
    }

    /// Copies the function into a larger window that starts `pad_cols` and
    /// `pad_rows` cells before this one and spans `ncols x nrows` cells.
    pub fn embed(&self, pad_cols: usize, pad_rows: usize, ncols: usize, nrows: usize) -> Result<Self> {
        if pad_cols + self.ncols > ncols || pad_rows + self.nrows > nrows {
            return Err(Error::InvalidGrid("target window does not contain the source".into()));
        }
        let mut values = vec![0.0; ncols * nrows];
        for i in 0..self.nrows {
            let dst = (i + pad_rows) * ncols + pad_cols;
            values[dst..dst + self.ncols].copy_from_slice(self.row(i));
        }
        Self::new(
            self.origin_x - pad_cols as f64 * self.spacing,
            self.origin_y - pad_rows as f64 * self.spacing,
            self.spacing,
            ncols,
            nrows,
            values,
        )
    }
}

impl GridFunction for SampledFunction2D {
    fn cell_values(&self) -> &[f64] {
        &self.values
    }

    fn measure(&self) -> GridCellMeasure {
        GridCellMeasure { dim: 2, cell_measure: self.spacing * self.spacing }
    }
}

pub fn sup_norm(f: &impl GridFunction) -> f64 {
    f.sup_norm()
}

/// Contents of a grid file.
#[derive(Clone, Debug, PartialEq)]
pub enum GridFile {
    One(SampledFunction1D),
    Two(SampledFunction2D),
}

impl GridFile {
    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (header_no, header) = loop {
            match lines.next() {
                Some((no, line)) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break (no + 1, line);
                    }
                }
                None => return Err(Error::Parse { line: 0, msg: "empty grid file".into() }),
            }
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        let mut values = Vec::new();
        for (no, line) in lines {
            for tok in line?.split_whitespace() {
                values.push(parse_tok::<f64>(tok, no + 1)?);
            }
        }
        let bad_header = |msg: &str| Error::Parse { line: header_no, msg: msg.into() };
        match fields.first().copied() {
            Some("GRID1") => {
                if fields.len() != 4 {
                    return Err(bad_header("expected `GRID1 origin spacing n`"));
                }
                let origin = parse_tok(fields[1], header_no)?;
                let spacing = parse_tok(fields[2], header_no)?;
                let n: usize = parse_tok(fields[3], header_no)?;
                if values.len() != n {
                    return Err(bad_header(&format!("header declares {n} samples, found {}", values.len())));
                }
                Ok(Self::One(SampledFunction1D::new(origin, spacing, values)?))
            }
            Some("GRID2") => {
                if fields.len() != 6 {
                    return Err(bad_header("expected `GRID2 origin_x origin_y spacing ncols nrows`"));
                }
                let ox = parse_tok(fields[1], header_no)?;
                let oy = parse_tok(fields[2], header_no)?;
                let spacing = parse_tok(fields[3], header_no)?;
                let ncols: usize = parse_tok(fields[4], header_no)?;
                let nrows: usize = parse_tok(fields[5], header_no)?;
                if values.len() != ncols * nrows {
                    return Err(bad_header(&format!(
                        "header declares {} samples, found {}",
                        ncols * nrows,
                        values.len()
                    )));
                }
                Ok(Self::Two(SampledFunction2D::new(ox, oy, spacing, ncols, nrows, values)?))
            }
            _ => Err(bad_header("unknown grid tag")),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::read(text.as_bytes())
    }

    /// Text form; `{:?}` on `f64` is the shortest decimal that round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Self::One(f) => {
                let _ = writeln!(out, "GRID1 {:?} {:?} {}", f.origin, f.spacing, f.len());
                push_row(&mut out, f.values());
            }
            Self::Two(f) => {
                let _ = writeln!(
                    out,
                    "GRID2 {:?} {:?} {:?} {} {}",
                    f.origin_x, f.origin_y, f.spacing, f.ncols, f.nrows
                );
                for i in 0..f.nrows {
                    push_row(&mut out, f.row(i));
                }
            }
        }
        out
    }

    pub fn write(&self, mut writer: impl Write) -> Result<()> {
        writer.write_all(self.to_text().as_bytes())?;
        Ok(())
    }
}

fn push_row(out: &mut String, row: &[f64]) {
    for (k, v) in row.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v:?}");
    }
    out.push('\n');
}

fn parse_tok<T: FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("cannot parse `{tok}`") })
}
