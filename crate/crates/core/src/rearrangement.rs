//! Exact non-increasing rearrangements of grid functions.
//!
//! The rearrangement `f*` of a cell-constant function is itself a step
//! function on `(0, inf)`: the absolute cell values sorted in decreasing
//! order, each occupying one cell measure. [`StepProfile`] stores it in
//! canonical form (strictly decreasing positive values, positive lengths)
//! and evaluates `f*`, `f**` and power-weighted integrals of `f*` in closed
//! form.
//!
//! `f*` is taken right-continuous: piece `k` covers `[e_{k-1}, e_k)`, so
//! `f*(total_measure) = 0`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::grid::GridFunction;
use crate::verdict::VerdictRecord;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepProfile {
    /// Strictly decreasing, positive.
    values: Vec<f64>,
    /// Right endpoints of the pieces, strictly increasing.
    ends: Vec<f64>,
    /// `mass[k] = int_0^{ends[k]} f*`.
    mass: Vec<f64>,
}

impl StepProfile {
    pub fn zero() -> Self {
        Self { values: Vec::new(), ends: Vec::new(), mass: Vec::new() }
    }

    /// Canonicalizes arbitrary `(value, measure)` pieces: sorts by value,
    /// merges equal values and drops zero values.
    pub fn from_pieces(pieces: &[(f64, f64)]) -> Result<Self> {
        for &(v, m) in pieces {
            if !(v.is_finite() && v >= 0.0) {
                return domain(format!("piece value {v} must be finite and non-negative"));
            }
            if !(m.is_finite() && m > 0.0) {
                return domain(format!("piece measure {m} must be finite and positive"));
            }
        }
        let mut sorted: Vec<(f64, f64)> = pieces.iter().copied().filter(|&(v, _)| v > 0.0).collect();
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut values = Vec::new();
        let mut ends: Vec<f64> = Vec::new();
        let mut end = 0.0;
        for (v, m) in sorted {
            end += m;
            if values.last() == Some(&v) {
                *ends.last_mut().expect("non-empty") = end;
            } else {
                values.push(v);
                ends.push(end);
            }
        }
        Ok(Self::with_ends(values, ends))
    }

    /// Rearrangement of `|f|` for a grid function. Breakpoints are computed as
    /// `count * cell_measure` so they coincide exactly with grid arguments
    /// formed the same way.
    pub fn from_grid(f: &impl GridFunction) -> Self {
        Self::from_cells(f.cell_values(), f.measure().cell_measure)
    }

    pub fn from_cells(cells: &[f64], cell_measure: f64) -> Self {
        let mut abs: Vec<f64> = cells.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
        abs.sort_unstable_by(|a, b| b.total_cmp(a));
        let mut values = Vec::new();
        let mut ends = Vec::new();
        let mut i = 0;
        while i < abs.len() {
            let v = abs[i];
            let mut j = i + 1;
            while j < abs.len() && abs[j] == v {
                j += 1;
            }
            values.push(v);
            ends.push(j as f64 * cell_measure);
            i = j;
        }
        Self::with_ends(values, ends)
    }

    fn with_ends(values: Vec<f64>, ends: Vec<f64>) -> Self {
        let mut mass = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        let mut start = 0.0;
        for (v, &e) in values.iter().zip(&ends) {
            acc += v * (e - start);
            mass.push(acc);
            start = e;
        }
        Self { values, ends, mass }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(value, measure)` pieces in decreasing value order.
    pub fn pieces(&self) -> Vec<(f64, f64)> {
        let mut start = 0.0;
        self.values
            .iter()
            .zip(&self.ends)
            .map(|(&v, &e)| {
                let piece = (v, e - start);
                start = e;
                piece
            })
            .collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ends(&self) -> &[f64] {
        &self.ends
    }

    /// Measure of the support of `f*`.
    pub fn total_measure(&self) -> f64 {
        self.ends.last().copied().unwrap_or(0.0)
    }

    /// `f*(0+)`, the essential supremum.
    pub fn sup(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `int_0^inf f*`, the L1 norm.
    pub fn total_mass(&self) -> f64 {
        self.mass.last().copied().unwrap_or(0.0)
    }

    /// Index of the piece containing `t`, or `len()` beyond the support.
    fn locate(&self, t: f64) -> usize {
        self.ends.partition_point(|&e| e <= t)
    }

    /// `f*(t)` for `t >= 0`, right-continuous.
    pub fn value_at(&self, t: f64) -> f64 {
        self.values.get(self.locate(t)).copied().unwrap_or(0.0)
    }

    pub fn evaluate_star(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("f*(t) needs t > 0, got {t}"));
        }
        Ok(self.value_at(t))
    }

    /// `int_0^t f*(u) du`.
    pub fn integral_to(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let k = self.locate(t);
        if k == self.len() {
            return self.total_mass();
        }
        let (before, start) = if k == 0 { (0.0, 0.0) } else { (self.mass[k - 1], self.ends[k - 1]) };
        before + self.values[k] * (t - start)
    }

    /// `f**(t) = (1/t) int_0^t f*`.
    pub fn double_star(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("f**(t) needs t > 0, got {t}"));
        }
        Ok(self.integral_to(t) / t)
    }

    /// `int_a^b f*(t) t^(gamma - 1) dt` in closed form, `gamma > 0`,
    /// `0 <= a <= b` (`b` may be infinite).
    pub fn power_integral(&self, gamma: f64, a: f64, b: f64) -> f64 {
        assert!(gamma > 0.0, "power_integral needs gamma > 0");
        let b = b.min(self.total_measure());
        if !(b > a) {
            return 0.0;
        }
        let mut acc = 0.0;
        let mut start = 0.0f64;
        for (&v, &e) in self.values.iter().zip(&self.ends) {
            let lo = start.max(a);
            let hi = e.min(b);
            if hi > lo {
                acc += v * (hi.powf(gamma) - lo.powf(gamma));
            }
            if e >= b {
                break;
            }
            start = e;
        }
        acc / gamma
    }

    /// `int_a^b f*(u) du/u` for `0 < a <= b` in closed form.
    pub fn log_integral(&self, a: f64, b: f64) -> f64 {
        let b = b.min(self.total_measure());
        if !(b > a) {
            return 0.0;
        }
        let mut acc = 0.0;
        let mut start = 0.0f64;
        for (&v, &e) in self.values.iter().zip(&self.ends) {
            let lo = start.max(a);
            let hi = e.min(b);
            if hi > lo {
                acc += v * (hi / lo).ln();
            }
            if e >= b {
                break;
            }
            start = e;
        }
        acc
    }

    /// CSV with a `value,measure` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,measure\n");
        for (v, m) in self.pieces() {
            let _ = writeln!(out, "{v:?},{m:?}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == "value,measure" => {}
            _ => return Err(Error::Parse { line: 1, msg: "missing `value,measure` header".into() }),
        }
        let mut pieces = Vec::new();
        for (no, line) in lines {
            let bad = || Error::Parse { line: no + 1, msg: format!("bad row `{line}`") };
            let (v, m) = line.split_once(',').ok_or_else(bad)?;
            pieces.push((v.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?));
        }
        Self::from_pieces(&pieces)
    }
}

/// Convenience wrapper over [`StepProfile::from_grid`].
pub fn rearrange(f: &impl GridFunction) -> StepProfile {
    StepProfile::from_grid(f)
}

/// Right-continuous step data of `lambda(y) = |{|f| > y}|` for `y >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionFunction {
    /// Ascending, starting at 0.
    pub thresholds: Vec<f64>,
    /// `measures[i] = lambda(y)` for `thresholds[i] <= y < thresholds[i+1]`.
    pub measures: Vec<f64>,
}

impl DistributionFunction {
    pub fn of(profile: &StepProfile) -> Self {
        let n = profile.len();
        let mut thresholds = vec![0.0];
        let mut measures = vec![profile.total_measure()];
        for k in (0..n).rev() {
            thresholds.push(profile.values[k]);
            measures.push(if k == 0 { 0.0 } else { profile.ends[k - 1] });
        }
        Self { thresholds, measures }
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return domain(format!("distribution function needs y >= 0, got {y}"));
        }
        let i = self.thresholds.partition_point(|&th| th <= y);
        Ok(self.measures[i - 1])
    }
}

/// Checks `g*(s) - g*(t) <= (1/ln 2) int_{s/2}^t [g*(u) - g*(2u)] du/u`
/// with both sides in closed form. `t` may be `f64::INFINITY`.
///
/// Beyond the total measure `T` both `g*(u)` and `g*(2u)` vanish, so the
/// upper limit is replaced by `min(t, T)` without changing the integral.
pub fn oscillation_inequality_check(profile: &StepProfile, s: f64, t: f64) -> Result<VerdictRecord> {
    if !(s > 0.0) {
        return domain(format!("oscillation check needs s > 0, got {s}"));
    }
    if !(s < t) {
        return domain(format!("oscillation check needs s < t, got s = {s}, t = {t}"));
    }
    let lhs = profile.value_at(s) - if t.is_finite() { profile.value_at(t) } else { 0.0 };
    let rhs_core = oscillation_integral(profile, s / 2.0, t.min(profile.total_measure()));
    let tol = 1e-12 * profile.sup().max(1.0);
    Ok(VerdictRecord::explicit("rearrangement_oscillation", lhs, rhs_core, std::f64::consts::LOG2_E, tol, 0.0)
        .with_param("s", s)
        .with_param("t", if t.is_finite() { t } else { -1.0 }))
}

/// `int_a^b [g*(u) - g*(2u)] du/u` by splitting `(a, b)` at every breakpoint
/// of the integrand (piece ends and their halves).
fn oscillation_integral(profile: &StepProfile, a: f64, b: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let mut cuts: Vec<f64> = profile
        .ends
        .iter()
        .flat_map(|&e| [e, e / 2.0])
        .filter(|&c| c > a && c < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    cuts.dedup();
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let jump = profile.value_at(mid) - profile.value_at(2.0 * mid);
        if jump != 0.0 {
            acc += jump * (w[1] / w[0]).ln();
        }
    }
    acc
}
