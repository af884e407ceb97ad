//! An unbounded function whose sections have uniformly controlled Lipschitz
//! norms in every Lorentz space `L^{p,q}` with `q > 1`:
//!
//! `f(x, y) = (ln(4 / (|x| + |y|)))^beta * cutoff(|x| + |y|)`, `0 < beta < 1 - 1/q`.
//!
//! Along the diagonal simplices `|x| + |y| = r` the function is constant
//! and grows like `(ln(4/r))^beta` at the origin, while the Lipschitz-`1/p`
//! norms of its sections are dominated by `x^{-1/p} (ln(2/x))^{beta - 1}`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::grid::{SampledFunction1D, SampledFunction2D};
use crate::norms::{lorentz_norm, LorentzParams};
use crate::numeric::as_multiple;
use crate::rearrangement::StepProfile;
use crate::verdict::{RefinementTrace, VerdictRecord};

/// Radii below this are evaluated at the clamp.
pub const CLAMP_RADIUS: f64 = 1e-300;
/// Points per decade of the default shift grid for the `psi` supremum.
pub const H_GRID_PER_DECADE: usize = 64;
/// Coarsest spacing that still puts eight cells across the cutoff zone.
pub const MAX_SPACING: f64 = 1.0 / 16.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    p: f64,
    q: f64,
    beta: f64,
}

impl CounterexampleSpec {
    pub fn new(p: f64, q: f64, beta: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite() && q > 1.0 && q.is_finite()) {
            return domain(format!("need 1 < p, q < inf, got p = {p}, q = {q}"));
        }
        if !(beta > 0.0 && beta < 1.0 - 1.0 / q) {
            return domain(format!("need 0 < beta < 1 - 1/q = {}, got {beta}", 1.0 - 1.0 / q));
        }
        Ok(Self { p, q, beta })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Standard smooth transition: 0 at `s <= 0`, 1 at `s >= 1`.
fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    a / (a + b)
}

/// Smooth cutoff: 1 on `[-1/2, 1/2]`, 0 outside `(-1, 1)`.
pub fn cutoff(t: f64) -> f64 {
    let t = t.abs();
    if t <= 0.5 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        smooth_step(2.0 * (1.0 - t))
    }
}

/// `|ln(4 / r)|^beta` for `r > 0`.
fn log_power(beta: f64, r: f64) -> f64 {
    (4.0 / r.max(CLAMP_RADIUS)).ln().abs().powf(beta)
}

/// Radial profile `G(r) = |ln(4/r)|^beta cutoff(r)`, zero at the origin.
fn radial(beta: f64, r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let c = cutoff(r);
    if c == 0.0 {
        0.0
    } else {
        log_power(beta, r) * c
    }
}

pub fn eval_f(spec: &CounterexampleSpec, x: f64, y: f64) -> f64 {
    radial(spec.beta, x.abs() + y.abs())
}

/// `(r, (ln(4/r))^beta)` for radii inside the zone where the cutoff is 1.
pub fn divergence_probe(spec: &CounterexampleSpec, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    for w in radii.windows(2) {
        if !(w[1] < w[0]) {
            return domain("radii must strictly decrease");
        }
    }
    radii
        .iter()
        .map(|&r| {
            if r > 0.0 && r <= 0.5 {
                Ok((r, log_power(spec.beta, r)))
            } else {
                domain(format!("probe radius {r} outside (0, 1/2]"))
            }
        })
        .collect()
}

/// Radius at which `(ln(4/r))^beta = level`; every smaller radius exceeds it.
pub fn radius_exceeding(spec: &CounterexampleSpec, level: f64) -> f64 {
    4.0 * (-level.powf(1.0 / spec.beta)).exp()
}

/// `psi(x, h) = h^{-1/p} [(ln(4/x))^beta - (ln(4/(x+h)))^beta]`.
pub fn psi_xh(spec: &CounterexampleSpec, x: f64, h: f64) -> f64 {
    // L1^b - L2^b = L1^b (1 - (1 - d/L1)^b) with d = ln(1 + h/x), free of cancellation
    let l1 = (4.0 / x).ln();
    let d = (h / x).ln_1p();
    let diff = l1.powf(spec.beta) * -(spec.beta * (-d / l1).ln_1p()).exp_m1();
    h.powf(-1.0 / spec.p) * diff
}

/// `(4 beta / x) h^{1 - 1/p} (ln(2/x))^{beta - 1}`, valid for `h <= x`.
pub fn small_shift_bound(spec: &CounterexampleSpec, x: f64, h: f64) -> f64 {
    4.0 * spec.beta / x * h.powf(1.0 - 1.0 / spec.p) * (2.0 / x).ln().powf(spec.beta - 1.0)
}

/// `x^{-1/p} (ln(2/x))^{beta - 1}`.
pub fn majorant_shape(spec: &CounterexampleSpec, x: f64) -> f64 {
    x.powf(-1.0 / spec.p) * (2.0 / x).ln().powf(spec.beta - 1.0)
}

/// Geometric grid on `[10^-decades, 1]` with `per_decade` points per decade.
pub fn geometric_grid(decades: usize, per_decade: usize) -> Vec<f64> {
    let n = decades * per_decade;
    (0..=n).map(|i| 10f64.powf(-(decades as f64) * (1.0 - i as f64 / n as f64))).collect()
}

pub fn default_h_grid() -> Vec<f64> {
    geometric_grid(16, H_GRID_PER_DECADE)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorantEstimate {
    pub x: f64,
    /// `max_h psi(x, h)` over the shift grid.
    pub value: f64,
    pub best_shift: f64,
    /// `c x^{-1/p} (ln(2/x))^{beta - 1}`.
    pub majorant: f64,
    pub ratio: f64,
}

/// `psi(x)` on a shift grid, compared with the majorant scaled by `c`.
pub fn psi_profile(spec: &CounterexampleSpec, x: f64, h_grid: &[f64], c: f64) -> Result<MajorantEstimate> {
    if !(x > 0.0 && x <= 1.0) {
        return domain(format!("x = {x} outside (0, 1]"));
    }
    if h_grid.is_empty() || h_grid.iter().any(|&h| !(h > 0.0 && h <= 1.0)) {
        return domain("shift grid must be non-empty and inside (0, 1]");
    }
    let (value, best_shift) = h_grid
        .iter()
        .map(|&h| (psi_xh(spec, x, h), h))
        .fold((0.0, h_grid[0]), |a, b| if b.0 > a.0 { b } else { a });
    let majorant = c * majorant_shape(spec, x);
    Ok(MajorantEstimate { x, value, best_shift, majorant, ratio: value / majorant })
}

/// Smallest `c` with `psi(x) <= c * shape(x)` on the given sweep.
pub fn calibrate_majorant(spec: &CounterexampleSpec, xs: &[f64], h_grid: &[f64]) -> Result<f64> {
    let mut c = 0.0f64;
    for &x in xs {
        c = c.max(psi_profile(spec, x, h_grid, 1.0)?.ratio);
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorantStudy {
    pub c: f64,
    pub calibration: Vec<MajorantEstimate>,
    /// Points between the calibration nodes, scored with the frozen `c`.
    pub holdout: Vec<MajorantEstimate>,
}

impl MajorantStudy {
    pub fn max_holdout_ratio(&self) -> f64 {
        self.holdout.iter().map(|e| e.ratio).fold(0.0, f64::max)
    }
}

/// Calibrates `c` on `x = 10^{-k/per_decade}` over `decades` decades and
/// scores the midpoints (in log scale) between consecutive nodes.
pub fn majorant_study(spec: &CounterexampleSpec, decades: usize, per_decade: usize) -> Result<MajorantStudy> {
    let hs = default_h_grid();
    let xs = geometric_grid(decades, per_decade);
    let c = calibrate_majorant(spec, &xs, &hs)?;
    let calibration = xs.iter().map(|&x| psi_profile(spec, x, &hs, c)).collect::<Result<Vec<_>>>()?;
    let holdout = xs
        .windows(2)
        .map(|w| psi_profile(spec, (w[0] * w[1]).sqrt(), &hs, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(MajorantStudy { c, calibration, holdout })
}

/// `int_0^1 (x^{1/p} x^{-1/p} (ln(2/x))^{beta-1})^q dx/x`, finite iff
/// `q (1 - beta) > 1`, in which case it equals
/// `(ln 2)^{1 - q(1-beta)} / (q(1-beta) - 1)`.
pub fn majorant_integral(q: f64, beta: f64) -> Option<f64> {
    let e = q * (1.0 - beta);
    if e > 1.0 {
        Some(std::f64::consts::LN_2.powf(1.0 - e) / (e - 1.0))
    } else {
        None
    }
}

/// `f` sampled at cell centers of `[-1, 1]^2`.
pub fn sample_grid(spec: &CounterexampleSpec, spacing: f64) -> Result<SampledFunction2D> {
    let n = cells_across(spacing)?;
    SampledFunction2D::from_fn(-1.0, -1.0, spacing, n, n, |x, y| eval_f(spec, x, y))
}

fn cells_across(spacing: f64) -> Result<usize> {
    if !(spacing > 0.0 && spacing <= MAX_SPACING) {
        return domain(format!("spacing {spacing} does not resolve the cutoff zone (need <= {MAX_SPACING})"));
    }
    match as_multiple(2.0, spacing) {
        Some(n) if n % 2 == 0 => Ok(n),
        _ => domain(format!("spacing {spacing} does not tile [-1, 1] symmetrically")),
    }
}

/// Lipschitz-`alpha` seminorms and sup norms of all x-sections of the sampled
/// function, computed without materializing the grid.
///
/// With cell centers at `+-(k + 1/2) spacing`, the sample at column `k`,
/// row `l` (both counted outward from the axes) is `c[k + l + 1]` with
/// `c[m] = G(m spacing)`. Every section is the even extension of a suffix of
/// the non-increasing sequence `c`, and for such a section a pair straddling
/// the axis differs by less than the same-side pair starting at the smaller
/// index. Hence `||Delta_h||_inf` for column `k` is the suffix maximum over
/// `m > k` of `c[m] - c[m + h]`.
pub fn radial_section_profiles(
    beta: f64,
    spacing: f64,
    alpha: f64,
) -> Result<(SampledFunction1D, SampledFunction1D)> {
    crate::norms::check_alpha(alpha)?;
    let n = cells_across(spacing)?;
    let half = n / 2;
    // c[m] for m in 0..=2n; zero from m = half on since the cutoff vanishes at r >= 1
    let c: Vec<f64> = (0..=2 * n).map(|m| if m == 0 { 0.0 } else { radial(beta, m as f64 * spacing) }).collect();
    let mut semi = vec![0.0f64; half];
    let mut suffix = vec![0.0f64; half + 1];
    for h in 1..=n {
        let weight = (h as f64 * spacing).powf(-alpha);
        // suffix[k] = max over m in k+1..=half of c[m] - c[m+h]; beyond half both vanish
        suffix[half] = 0.0;
        for k in (0..half).rev() {
            let m = k + 1;
            suffix[k] = suffix[k + 1].max(c[m] - c[m + h]);
        }
        for k in 0..half {
            semi[k] = semi[k].max(weight * suffix[k]);
        }
    }
    let by_column = |v: &[f64]| -> Vec<f64> {
        (0..n).map(|i| if i >= half { v[i - half] } else { v[half - 1 - i] }).collect()
    };
    let sups: Vec<f64> = (0..half).map(|k| c[k + 1]).collect();
    Ok((
        SampledFunction1D::new(-1.0, spacing, by_column(&semi))?,
        SampledFunction1D::new(-1.0, spacing, by_column(&sups))?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitenessLevel {
    pub spacing: f64,
    /// `||N||_{p,q}` of the section Lip-norm profile on one axis.
    pub section_norm: f64,
    /// Sum over both axes; the y-axis profile equals the x-axis one since
    /// `f(x, y) = f(y, x)` and the grid is symmetric.
    pub mixed_norm: f64,
    pub sup_norm: f64,
    /// `(ln(4 / r_min))^beta` with `r_min = spacing`, the smallest `|x| + |y|`
    /// over cell centers.
    pub analytic_sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitenessTrace {
    pub levels: Vec<FinitenessLevel>,
    pub trace: RefinementTrace,
}

impl FinitenessTrace {
    /// `max / min` of the mixed norm over the last `k` levels.
    pub fn tail_spread(&self, k: usize) -> f64 {
        let tail = &self.levels[self.levels.len().saturating_sub(k)..];
        let hi = tail.iter().map(|l| l.mixed_norm).fold(f64::MIN, f64::max);
        let lo = tail.iter().map(|l| l.mixed_norm).fold(f64::MAX, f64::min);
        hi / lo
    }

    /// Mixed norm at the finest level over the coarsest.
    pub fn growth(&self) -> f64 {
        self.levels.last().map_or(0.0, |l| l.mixed_norm) / self.levels.first().map_or(1.0, |l| l.mixed_norm)
    }

    /// Largest relative gap between grid and analytic sup norms.
    pub fn sup_mismatch(&self) -> f64 {
        self.levels.iter().map(|l| ((l.sup_norm - l.analytic_sup) / l.analytic_sup).abs()).fold(0.0, f64::max)
    }
}

/// Mixed `L^{p,q}[Lip 1/p]` norms at the given spacings for an arbitrary
/// Lorentz pair; `q = 1` gives the contrapositive trace.
pub fn section_norm_trace(beta: f64, params: LorentzParams, spacings: &[f64]) -> Result<FinitenessTrace> {
    if !(beta > 0.0 && beta < 1.0) {
        return domain(format!("beta = {beta} outside (0, 1)"));
    }
    let alpha = 1.0 / params.p();
    let mut levels = Vec::new();
    let mut records = Vec::new();
    for &dx in spacings {
        let (semi, sups) = radial_section_profiles(beta, dx, alpha)?;
        let full: Vec<f64> = semi.values().iter().zip(sups.values()).map(|(a, b)| a + b).collect();
        let section_norm = lorentz_norm(&StepProfile::from_cells(&full, dx), params);
        let sup_norm = sups.values().iter().copied().fold(0.0, f64::max);
        let level = FinitenessLevel {
            spacing: dx,
            section_norm,
            mixed_norm: 2.0 * section_norm,
            sup_norm,
            analytic_sup: log_power(beta, dx),
        };
        records.push(
            VerdictRecord::empirical("counterexample_mixed_norm", level.mixed_norm, sup_norm, dx)
                .with_param("p", params.p())
                .with_param("q", params.q())
                .with_param("beta", beta),
        );
        levels.push(level);
    }
    Ok(FinitenessTrace { levels, trace: RefinementTrace::new(records)? })
}

pub fn mixed_norm_finiteness(spec: &CounterexampleSpec, spacings: &[f64]) -> Result<FinitenessTrace> {
    section_norm_trace(spec.beta, LorentzParams::new(spec.p, spec.q)?, spacings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed::section_profiles;

    fn spec() -> CounterexampleSpec {
        CounterexampleSpec::new(2.0, 2.0, 0.25).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(CounterexampleSpec::new(1.0, 2.0, 0.25).is_err());
        assert!(CounterexampleSpec::new(2.0, 1.0, 0.25).is_err());
        assert!(CounterexampleSpec::new(2.0, 2.0, 0.5).is_err());
        assert!(CounterexampleSpec::new(2.0, 2.0, 0.0).is_err());
        assert!(CounterexampleSpec::new(2.0, 4.0, 0.7).is_ok());
    }

    #[test]
    fn cutoff_shape() {
        assert_eq!(cutoff(0.0), 1.0);
        assert_eq!(cutoff(-0.5), 1.0);
        assert_eq!(cutoff(1.0), 0.0);
        assert_eq!(cutoff(3.0), 0.0);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = cutoff(0.5 + i as f64 * 0.0005);
            assert!((0.0..=1.0).contains(&v) && v <= prev);
            prev = v;
        }
        assert!((cutoff(0.75) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn point_values() {
        let s = CounterexampleSpec::new(2.0, 4.0, 0.5).unwrap();
        assert_eq!(eval_f(&s, 4.0 / std::f64::consts::E, 0.0), 0.0);
        let v = eval_f(&s, 0.1, -0.3);
        assert!((v - 10f64.ln().sqrt()).abs() < 1e-15);
        assert_eq!(eval_f(&s, 0.0, 0.0), 0.0);
        assert!(eval_f(&s, 1e-320, 0.0).is_finite());
    }

    #[test]
    fn probe_values_and_inversion() {
        let s = CounterexampleSpec::new(2.0, 4.0, 0.5).unwrap();
        let t = divergence_probe(&s, &[0.5, 1e-3, 4e-8]).unwrap();
        assert!((t[2].1 - (8.0 * 10f64.ln()).sqrt()).abs() < 1e-12);
        assert!((t[2].1 - 4.292).abs() < 1e-3);
        assert!(t.windows(2).all(|w| w[1].1 > w[0].1));
        let r = radius_exceeding(&s, 10.0);
        assert!((r - 4.0 * (-100f64).exp()).abs() <= 1e-15 * r);
        assert!(divergence_probe(&s, &[r / 2.0]).unwrap()[0].1 > 10.0);
        assert!(divergence_probe(&s, &[0.6]).is_err());
        assert!(divergence_probe(&s, &[0.1, 0.2]).is_err());
        assert!(divergence_probe(&s, &[0.0]).is_err());
    }

    #[test]
    fn psi_profile_domain() {
        let s = spec();
        let hs = default_h_grid();
        assert!(psi_profile(&s, 0.0, &hs, 1.0).is_err());
        assert!(psi_profile(&s, 1.5, &hs, 1.0).is_err());
        assert!(psi_profile(&s, 0.5, &[2.0], 1.0).is_err());
        let e = psi_profile(&s, 1.0, &hs, 1.0).unwrap();
        let brute = hs.iter().map(|&h| psi_xh(&s, 1.0, h)).fold(0.0, f64::max);
        assert_eq!(e.value, brute);
    }

    #[test]
    fn small_shift_bound_holds() {
        let s = spec();
        for &x in &geometric_grid(10, 4) {
            for &h in &default_h_grid() {
                if h <= x {
                    assert!(psi_xh(&s, x, h) <= small_shift_bound(&s, x, h) * (1.0 + 1e-12), "x={x} h={h}");
                }
            }
        }
    }

    #[test]
    fn majorant_holds_out_of_sample() {
        for (p, q, beta) in [(2.0, 2.0, 0.25), (1.5, 4.0, 0.6), (3.0, 1.5, 0.1)] {
            let s = CounterexampleSpec::new(p, q, beta).unwrap();
            let st = majorant_study(&s, 12, 8).unwrap();
            assert!(st.c > 0.0 && st.c.is_finite());
            assert!(st.max_holdout_ratio() <= 1.0 + 1e-3, "({p}, {q}, {beta}): {}", st.max_holdout_ratio());
        }
    }

    #[test]
    fn beta_window_integral() {
        assert_eq!(majorant_integral(2.0, 0.5), None);
        assert_eq!(majorant_integral(2.0, 0.6), None);
        let v = majorant_integral(2.0, 0.25).unwrap();
        // int_{ln 2}^inf s^{-3/2} ds = 2 / sqrt(ln 2)
        assert!((v - 2.0 / std::f64::consts::LN_2.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn radial_profiles_match_generic_scan() {
        for k in [4u32, 5, 6] {
            let dx = 2f64.powi(-(k as i32));
            let f = sample_grid(&spec(), dx).unwrap();
            let generic = section_profiles(&f, 0.5).unwrap();
            let (semi, sups) = radial_section_profiles(0.25, dx, 0.5).unwrap();
            for j in 0..f.ncols() {
                let (a, b) = (generic.phi2.values()[j], semi.values()[j]);
                assert!((a - b).abs() <= 1e-12 * a.max(1.0), "dx={dx} col {j}: {a} vs {b}");
                assert_eq!(generic.psi2.values()[j], sups.values()[j]);
                // transpose symmetry of the sampled grid
                assert_eq!(generic.phi1.values()[j], generic.phi2.values()[j]);
            }
        }
    }

    #[test]
    fn spacing_must_resolve_cutoff() {
        assert!(radial_section_profiles(0.25, 0.25, 0.5).is_err());
        assert!(sample_grid(&spec(), 0.03).is_err());
        assert!(sample_grid(&spec(), 1.0 / 16.0).is_ok());
    }

    #[test]
    fn sections_maximize_at_the_axis() {
        // for fixed x the largest y-difference at shift h starts at y = 0+
        let s = spec();
        let n = 256;
        let dy = 1.0 / n as f64;
        let g = |x: f64, y: f64| log_power(s.beta, x + y);
        for &x in &[0.01, 0.05, 0.2, 0.5, 1.0] {
            for k in 1..=n / 2 {
                let h = k as f64 * dy;
                let best = (0..=n - k)
                    .map(|i| (g(x, i as f64 * dy) - g(x, i as f64 * dy + h)).abs())
                    .fold(0.0, f64::max);
                let closed = psi_xh(&s, x, h) * h.powf(0.5);
                assert!((best - closed).abs() <= 1e-12 * closed.max(1e-300), "x={x} h={h}");
            }
        }
    }

    #[test]
    fn trace_is_symmetric_and_monotone_sup() {
        let t = mixed_norm_finiteness(&spec(), &[1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]).unwrap();
        assert!(t.sup_mismatch() < 1e-12);
        assert!(t.levels.windows(2).all(|w| w[1].sup_norm > w[0].sup_norm));
        assert_eq!(t.trace.records.len(), 3);
    }
}
