//! Steklov averages `f_h(x, y) = h^-2 int_0^h int_0^h f(x+u, y+v) du dv`,
//! residuals `g_h = f - f_h`, and the estimates relating them to the
//! section seminorm profiles.
//!
//! For `h = m * spacing` the average of a cell-constant function is bilinear
//! on every cell with corner values equal to `m x m` block means. We store
//! those corner values as a cell-constant grid: row differences at grid
//! shifts of a piecewise-linear function are extremal at grid points, so the
//! discrete Lipschitz quantities of the stored grid are those of `f_h`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::grid::{GridFunction, SampledFunction2D};
use crate::mixed::seminorm_profiles;
use crate::norms::seminorm_scan;
use crate::numeric::as_multiple;
use crate::rearrangement::StepProfile;
use crate::verdict::VerdictRecord;

/// Absolute slack (times `max(1, ||f||_inf)`) for the explicit-constant checks.
pub const SMOOTHING_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteklovAverage {
    pub h: f64,
    /// Block count per axis, `h / spacing`.
    pub cells: usize,
    /// Window extended by `cells - 1` cells below and to the left of the source.
    pub result: SampledFunction2D,
}

fn cells_of(f: &SampledFunction2D, h: f64) -> Result<usize> {
    match as_multiple(h, f.spacing()) {
        Some(m) if m >= 1 => Ok(m),
        _ => domain(format!("averaging width {h} is not a positive multiple of the spacing {}", f.spacing())),
    }
}

/// Sums of `m` consecutive entries starting at every offset in `-(m-1)..n`.
fn window_sums(v: &[f64], m: usize) -> Vec<f64> {
    let n = v.len() as isize;
    let m = m as isize;
    (-(m - 1)..n)
        .map(|s| {
            let lo = s.max(0);
            let hi = (s + m).min(n);
            v[lo as usize..hi as usize].iter().sum()
        })
        .collect()
}

pub fn steklov(f: &SampledFunction2D, h: f64) -> Result<SteklovAverage> {
    let m = cells_of(f, h)?;
    let ncols = f.ncols() + m - 1;
    let nrows = f.nrows() + m - 1;
    // horizontal block sums, one row of the source at a time
    let rows: Vec<Vec<f64>> = (0..f.nrows()).map(|i| window_sums(f.row(i), m)).collect();
    let mut values = vec![0.0; ncols * nrows];
    let scale = 1.0 / (m * m) as f64;
    let mut col = vec![0.0; f.nrows()];
    for j in 0..ncols {
        for (c, r) in col.iter_mut().zip(&rows) {
            *c = r[j];
        }
        for (i, s) in window_sums(&col, m).into_iter().enumerate() {
            values[i * ncols + j] = s * scale;
        }
    }
    let pad = (m - 1) as f64 * f.spacing();
    let result = SampledFunction2D::new(f.origin_x() - pad, f.origin_y() - pad, f.spacing(), ncols, nrows, values)?;
    Ok(SteklovAverage { h, cells: m, result })
}

/// `g_h = f - f_h` on the window of `f_h`.
pub fn residual(f: &SampledFunction2D, h: f64) -> Result<SampledFunction2D> {
    let avg = steklov(f, h)?;
    residual_from(f, &avg)
}

fn residual_from(f: &SampledFunction2D, avg: &SteklovAverage) -> Result<SampledFunction2D> {
    let fh = &avg.result;
    let pad = avg.cells - 1;
    let embedded = f.embed(pad, pad, fh.ncols(), fh.nrows())?;
    embedded.add(&fh.scaled(-1.0))
}

/// One row of the residual convergence table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub residual_sup: f64,
    /// `int_0^h t^{1/p} [phi1*(t) + phi2*(t)] dt/t`.
    pub bound_core: f64,
    pub ratio: f64,
}

/// Rearranged seminorm profiles of order `1/p`, computed once per `(f, p)`.
#[derive(Clone, Debug)]
pub struct SmoothingChecks<'a> {
    f: &'a SampledFunction2D,
    p: f64,
    phi1: StepProfile,
    phi2: StepProfile,
    tol: f64,
}

impl<'a> SmoothingChecks<'a> {
    pub fn new(f: &'a SampledFunction2D, p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return domain(format!("p must be >= 1, got {p}"));
        }
        let (phi1, phi2) = seminorm_profiles(f, 1.0 / p)?;
        Ok(Self {
            f,
            p,
            phi1: StepProfile::from_grid(&phi1),
            phi2: StepProfile::from_grid(&phi2),
            tol: SMOOTHING_TOL * f.sup_norm().max(1.0),
        })
    }

    /// `||f_h(., y)||*_{Lip 1/p} <= phi1**(h)` over all rows and the mirrored
    /// bound over all columns.
    pub fn steklov_lip_bound(&self, h: f64) -> Result<Vec<VerdictRecord>> {
        let avg = steklov(self.f, h)?;
        let fh = &avg.result;
        let alpha = 1.0 / self.p;
        let dx = fh.spacing();
        let rows = (0..fh.nrows()).map(|i| seminorm_scan(fh.row(i), dx, alpha).0).fold(0.0, f64::max);
        let cols = (0..fh.ncols())
            .map(|j| {
                let c: Vec<f64> = (0..fh.nrows()).map(|i| fh.get(i, j)).collect();
                seminorm_scan(&c, dx, alpha).0
            })
            .fold(0.0, f64::max);
        let mk = |id: &str, lhs: f64, prof: &StepProfile| -> Result<VerdictRecord> {
            Ok(VerdictRecord::explicit(id, lhs, prof.double_star(h)?, 1.0, self.tol, dx)
                .with_param("p", self.p)
                .with_param("h", h))
        };
        Ok(vec![mk("steklov_lip_rows", rows, &self.phi1)?, mk("steklov_lip_columns", cols, &self.phi2)?])
    }

    /// `g_h*(h^2) <= 2 h^{1/p} [phi1**(h) + phi2**(h)]`.
    pub fn residual_decay(&self, h: f64) -> Result<VerdictRecord> {
        let avg = steklov(self.f, h)?;
        let g = residual_from(self.f, &avg)?;
        let m = avg.cells as f64;
        // h^2 as a whole number of cells, matching the profile breakpoints
        let t = m * m * g.measure().cell_measure;
        let lhs = StepProfile::from_grid(&g).value_at(t);
        let rhs = h.powf(1.0 / self.p) * (self.phi1.double_star(h)? + self.phi2.double_star(h)?);
        Ok(VerdictRecord::explicit("residual_decay", lhs, rhs, 2.0, self.tol, self.f.spacing())
            .with_param("p", self.p)
            .with_param("h", h))
    }

    /// `||g_h||_inf` for `h = 2^k spacing`, largest first, alongside
    /// `int_0^h t^{1/p} [phi1* + phi2*] dt/t`.
    pub fn convergence_study(&self) -> Result<Vec<ConvergenceRow>> {
        let span = self.f.ncols().max(self.f.nrows());
        let mut ks = Vec::new();
        let mut m = 1usize;
        while m <= span {
            ks.push(m);
            m *= 2;
        }
        ks.reverse();
        let gamma = 1.0 / self.p;
        ks.into_iter()
            .map(|m| {
                let h = m as f64 * self.f.spacing();
                let sup = residual(self.f, h)?.sup_norm();
                let bound = self.phi1.power_integral(gamma, 0.0, h) + self.phi2.power_integral(gamma, 0.0, h);
                Ok(ConvergenceRow { h, residual_sup: sup, bound_core: bound, ratio: crate::numeric::ratio(sup, bound) })
            })
            .collect()
    }
}

pub fn steklov_lip_bound_check(f: &SampledFunction2D, p: f64, h: f64) -> Result<Vec<VerdictRecord>> {
    SmoothingChecks::new(f, p)?.steklov_lip_bound(h)
}

pub fn residual_decay_check(f: &SampledFunction2D, p: f64, h: f64) -> Result<VerdictRecord> {
    SmoothingChecks::new(f, p)?.residual_decay(h)
}

pub fn uniform_convergence_study(f: &SampledFunction2D, p: f64) -> Result<Vec<ConvergenceRow>> {
    SmoothingChecks::new(f, p)?.convergence_study()
}
