//! Embedding of functions with integrable pure second derivatives into the
//! mixed space with `p = 1`, checked on a catalog of smooth functions with
//! analytic derivatives.
//!
//! Every catalog member is a product `u(x) v(y)` of one-variable factors, so
//! all partial derivatives are exact closed forms.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::grid::SampledFunction2D;
use crate::mixed::u_p_norm;
use crate::norms::seminorm_scan;
use crate::numeric::{as_multiple, pairwise_sum};
use crate::verdict::VerdictRecord;

/// Largest admissible mass outside the window, relative to `||f||_1`.
pub const TAIL_TOLERANCE: f64 = 1e-9;
/// Multiplier of `spacing * third-derivative scale` in the discretization budget.
pub const BUDGET_FACTOR: f64 = 5.0;

/// A smooth factor of one variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Factor {
    Zero,
    /// `exp(-(x / sigma)^2)`.
    Gauss { sigma: f64 },
    /// `(1 + slope * x / radius) (1 - (x / radius)^2)^4` on `|x| < radius`.
    PolyBump { radius: f64, slope: f64 },
}

impl Factor {
    /// Value and first three derivatives at `x`.
    pub fn jet(&self, x: f64) -> [f64; 4] {
        match *self {
            Factor::Zero => [0.0; 4],
            Factor::Gauss { sigma } => {
                let s2 = sigma * sigma;
                let u = (-(x * x) / s2).exp();
                [
                    u,
                    -2.0 * x / s2 * u,
                    (4.0 * x * x / (s2 * s2) - 2.0 / s2) * u,
                    (12.0 * x / (s2 * s2) - 8.0 * x * x * x / (s2 * s2 * s2)) * u,
                ]
            }
            Factor::PolyBump { radius, slope } => {
                let s = x / radius;
                if s.abs() >= 1.0 {
                    return [0.0; 4];
                }
                let w = 1.0 - s * s;
                let b = w.powi(4);
                let b1 = -8.0 * s * w.powi(3);
                let b2 = -8.0 * w.powi(3) + 48.0 * s * s * w * w;
                let b3 = 144.0 * s * w * w - 192.0 * s.powi(3) * w;
                let poly = 1.0 + slope * s;
                let r = radius;
                [poly * b, (slope * b + poly * b1) / r, (2.0 * slope * b1 + poly * b2) / (r * r), (3.0 * slope * b2 + poly * b3) / (r * r * r)]
            }
        }
    }

    /// `int |u|`.
    pub fn l1_norm(&self) -> f64 {
        match *self {
            Factor::Zero => 0.0,
            Factor::Gauss { sigma } => sigma * std::f64::consts::PI.sqrt(),
            // the odd part integrates to zero and |1 + slope s| = 1 + slope s for |slope| < 1
            Factor::PolyBump { radius, .. } => radius * 256.0 / 315.0,
        }
    }

    /// `int_{|x| > w} |u|`.
    pub fn tail_mass(&self, w: f64) -> f64 {
        match *self {
            Factor::Zero => 0.0,
            Factor::Gauss { sigma } => sigma * std::f64::consts::PI.sqrt() * libm::erfc(w / sigma),
            Factor::PolyBump { radius, .. } => {
                if radius <= w {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// `|u(w)| / sup |u|`, the relative level at which the window truncates.
    pub fn truncation_level(&self, w: f64) -> f64 {
        match *self {
            Factor::Zero => 0.0,
            Factor::Gauss { sigma } => (-(w / sigma).powi(2)).exp(),
            Factor::PolyBump { .. } => {
                let peak = self.sup_abs(0);
                if peak == 0.0 {
                    0.0
                } else {
                    self.jet(w)[0].abs().max(self.jet(-w)[0].abs()) / peak
                }
            }
        }
    }

    fn reach(&self) -> f64 {
        match *self {
            Factor::Zero => 1.0,
            Factor::Gauss { sigma } => 6.0 * sigma,
            Factor::PolyBump { radius, .. } => radius,
        }
    }

    /// `sup |u^(order)|`, estimated on a dense sample of the support.
    pub fn sup_abs(&self, order: usize) -> f64 {
        let reach = self.reach();
        let n = 20_000;
        (0..=n)
            .map(|i| self.jet(-reach + 2.0 * reach * i as f64 / n as f64)[order].abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogId {
    Zero,
    Gaussian,
    ProductOfBumps,
    PolynomialTimesBump,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothTestFunction {
    pub id: CatalogId,
    pub x: Factor,
    pub y: Factor,
}

impl SmoothTestFunction {
    pub fn zero() -> Self {
        Self { id: CatalogId::Zero, x: Factor::Zero, y: Factor::Zero }
    }

    /// `exp(-(x/sigma)^2 - (y/sigma)^2)`.
    pub fn gaussian(sigma: f64) -> Self {
        Self::anisotropic_gaussian(sigma, sigma)
    }

    pub fn anisotropic_gaussian(sigma_x: f64, sigma_y: f64) -> Self {
        Self {
            id: CatalogId::Gaussian,
            x: Factor::Gauss { sigma: sigma_x },
            y: Factor::Gauss { sigma: sigma_y },
        }
    }

    pub fn product_of_bumps(radius: f64) -> Self {
        let b = Factor::PolyBump { radius, slope: 0.0 };
        Self { id: CatalogId::ProductOfBumps, x: b, y: b }
    }

    /// `(1 + slope x / radius)` times the product bump; `|slope| < 1`.
    pub fn polynomial_times_bump(radius: f64, slope: f64) -> Self {
        Self {
            id: CatalogId::PolynomialTimesBump,
            x: Factor::PolyBump { radius, slope },
            y: Factor::PolyBump { radius, slope: 0.0 },
        }
    }

    /// `f(lambda x, y)`.
    pub fn dilate_x(&self, lambda: f64) -> Self {
        let x = match self.x {
            Factor::Zero => Factor::Zero,
            Factor::Gauss { sigma } => Factor::Gauss { sigma: sigma / lambda },
            Factor::PolyBump { radius, slope } => Factor::PolyBump { radius: radius / lambda, slope },
        };
        Self { x, ..*self }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.x.jet(x)[0] * self.y.jet(y)[0]
    }

    pub fn d1(&self, x: f64, y: f64) -> f64 {
        self.x.jet(x)[1] * self.y.jet(y)[0]
    }

    pub fn d2(&self, x: f64, y: f64) -> f64 {
        self.x.jet(x)[0] * self.y.jet(y)[1]
    }

    pub fn d11(&self, x: f64, y: f64) -> f64 {
        self.x.jet(x)[2] * self.y.jet(y)[0]
    }

    pub fn d22(&self, x: f64, y: f64) -> f64 {
        self.x.jet(x)[0] * self.y.jet(y)[2]
    }

    pub fn l1_norm(&self) -> f64 {
        self.x.l1_norm() * self.y.l1_norm()
    }
}

/// The square `[-half_width, half_width]^2` cut into cells of `spacing`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub half_width: f64,
    pub spacing: f64,
    pub cells: usize,
}

impl Window {
    pub fn new(half_width: f64, spacing: f64) -> Result<Self> {
        if !(half_width > 0.0 && spacing > 0.0) {
            return domain("window half-width and spacing must be positive");
        }
        match as_multiple(2.0 * half_width, spacing) {
            Some(cells) if cells > 0 => Ok(Self { half_width, spacing, cells }),
            _ => domain(format!("spacing {spacing} does not tile a window of width {}", 2.0 * half_width)),
        }
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Result<SampledFunction2D> {
        let o = -self.half_width;
        SampledFunction2D::from_fn(o, o, self.spacing, self.cells, self.cells, f)
    }

    fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| -self.half_width + (i as f64 + 0.5) * self.spacing).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SobolevData {
    pub l1_norm: f64,
    pub d11: f64,
    pub d22: f64,
    pub d1: f64,
    pub d2: f64,
}

fn check_window(g: &SmoothTestFunction, w: &Window) -> Result<()> {
    let norm = g.l1_norm();
    let hw = w.half_width;
    let tail = g.x.tail_mass(hw) * g.y.l1_norm() + g.y.tail_mass(hw) * g.x.l1_norm();
    if tail > TAIL_TOLERANCE * norm {
        return domain(format!("window of half-width {hw} leaves tail mass {tail:e} of a norm {norm:e}"));
    }
    Ok(())
}

/// `L1` norms by midpoint cell sums of the analytic evaluators.
///
/// The catalog is separable, so the two-dimensional cell sum of
/// `|a(x_j) b(y_i)|` is the product of the one-dimensional sums; computing it
/// that way is exact and linear in the number of cells per axis.
pub fn sobolev_data(g: &SmoothTestFunction, window: &Window) -> Result<SobolevData> {
    check_window(g, window)?;
    let cs = window.centers();
    let sums = |f: &Factor| -> [f64; 3] {
        let jets: Vec<[f64; 4]> = cs.iter().map(|&t| f.jet(t)).collect();
        let col = |k: usize| pairwise_sum(&jets.iter().map(|j| j[k].abs()).collect::<Vec<_>>()) * window.spacing;
        [col(0), col(1), col(2)]
    };
    let [u0, u1, u2] = sums(&g.x);
    let [v0, v1, v2] = sums(&g.y);
    Ok(SobolevData { l1_norm: u0 * v0, d11: u2 * v0, d22: u0 * v2, d1: u1 * v0, d2: u0 * v1 })
}

/// `Delta * scale` bound on the discretization error of the section check
/// along the given axis (1 = x, 2 = y).
fn budget(g: &SmoothTestFunction, w: &Window, axis: u8) -> f64 {
    let (along, across) = if axis == 2 { (&g.y, &g.x) } else { (&g.x, &g.y) };
    let scale = across.l1_norm() * along.sup_abs(3) + across.sup_abs(0) * along.sup_abs(2);
    BUDGET_FACTOR * w.spacing * scale
}

fn tagged(r: VerdictRecord, g: &SmoothTestFunction, w: &Window) -> VerdictRecord {
    let level = g.x.truncation_level(w.half_width).max(g.y.truncation_level(w.half_width));
    r.with_param("half_width", w.half_width).with_param("truncation_level", level)
}

/// `int ||f_x||*_{Lip 1} dx <= 1/2 ||D2^2 f||_1` and the mirrored bound, each
/// with a spacing-proportional discretization budget.
pub fn check_section_lip_bound(g: &SmoothTestFunction, window: &Window) -> Result<Vec<VerdictRecord>> {
    let data = sobolev_data(g, window)?;
    let f = window.sample(|x, y| g.value(x, y))?;
    let dx = window.spacing;
    let cols: Vec<f64> = (0..f.ncols())
        .map(|j| {
            let c: Vec<f64> = (0..f.nrows()).map(|i| f.get(i, j)).collect();
            seminorm_scan(&c, dx, 1.0).0
        })
        .collect();
    let rows: Vec<f64> = (0..f.nrows()).map(|i| seminorm_scan(f.row(i), dx, 1.0).0).collect();
    let lhs_cols = pairwise_sum(&cols) * dx;
    let lhs_rows = pairwise_sum(&rows) * dx;
    let b2 = budget(g, window, 2);
    let b1 = budget(g, window, 1);
    Ok(vec![
        tagged(VerdictRecord::explicit("section_lip_x_sections", lhs_cols, data.d22, 0.5, b2, dx), g, window),
        tagged(VerdictRecord::explicit("section_lip_y_sections", lhs_rows, data.d11, 0.5, b1, dx), g, window),
    ])
}

/// `||D_i f||_1` against `||f||_1^{1/2} ||D_i^2 f||_1^{1/2}` for both axes.
pub fn check_gagliardo_nirenberg(g: &SmoothTestFunction, window: &Window) -> Result<Vec<VerdictRecord>> {
    let d = sobolev_data(g, window)?;
    let dx = window.spacing;
    Ok(vec![
        tagged(VerdictRecord::empirical("gagliardo_nirenberg_1", d.d1, (d.l1_norm * d.d11).sqrt(), dx), g, window),
        tagged(VerdictRecord::empirical("gagliardo_nirenberg_2", d.d2, (d.l1_norm * d.d22).sqrt(), dx), g, window),
    ])
}

/// `||f||_{U_1}` against `||f||_1^{1/2} (||D1^2 f||_1^{1/2} + ||D2^2 f||_1^{1/2})`.
pub fn check_w122_into_u1(g: &SmoothTestFunction, window: &Window) -> Result<VerdictRecord> {
    let d = sobolev_data(g, window)?;
    let f = window.sample(|x, y| g.value(x, y))?;
    let lhs = u_p_norm(&f, 1.0)?.u_p_norm;
    let rhs = d.l1_norm.sqrt() * (d.d11.sqrt() + d.d22.sqrt());
    Ok(tagged(VerdictRecord::empirical("w122_into_u1", lhs, rhs, window.spacing), g, window))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_jets_match_finite_differences() {
        let factors = [
            Factor::Gauss { sigma: 0.7 },
            Factor::PolyBump { radius: 1.3, slope: 0.4 },
        ];
        let e = 1e-4;
        for f in factors {
            for &x in &[-0.9, -0.2, 0.05, 0.6] {
                let j = f.jet(x);
                let (p, m) = (f.jet(x + e), f.jet(x - e));
                for k in 0..3 {
                    let fd = (p[k] - m[k]) / (2.0 * e);
                    assert!((fd - j[k + 1]).abs() < 1e-6 * (1.0 + j[k + 1].abs()), "{f:?} x={x} k={k}");
                }
            }
        }
    }

    #[test]
    fn factorized_sums_match_cell_sums() {
        let g = SmoothTestFunction::polynomial_times_bump(0.9, 0.3);
        let w = Window::new(1.0, 0.05).unwrap();
        let d = sobolev_data(&g, &w).unwrap();
        let cs = w.centers();
        let brute = |h: &dyn Fn(f64, f64) -> f64| -> f64 {
            cs.iter().flat_map(|&y| cs.iter().map(move |&x| (x, y))).map(|(x, y)| h(x, y).abs()).sum::<f64>()
                * w.spacing
                * w.spacing
        };
        let pairs = [
            (d.l1_norm, brute(&|x, y| g.value(x, y))),
            (d.d1, brute(&|x, y| g.d1(x, y))),
            (d.d2, brute(&|x, y| g.d2(x, y))),
            (d.d11, brute(&|x, y| g.d11(x, y))),
            (d.d22, brute(&|x, y| g.d22(x, y))),
        ];
        for (a, b) in pairs {
            assert!((a - b).abs() <= 1e-12 * b, "{a} vs {b}");
        }
    }

    #[test]
    fn gaussian_mass_is_pi() {
        let w = Window::new(8.0, 0.05).unwrap();
        let d = sobolev_data(&SmoothTestFunction::gaussian(1.0), &w).unwrap();
        assert!((d.l1_norm - std::f64::consts::PI).abs() < 1e-6);
    }

    #[test]
    fn second_derivative_against_central_differences() {
        let g = SmoothTestFunction::product_of_bumps(1.0);
        let mut errs = Vec::new();
        for dx in [0.04, 0.02] {
            let w = Window::new(1.2, dx).unwrap();
            let f = w.sample(|x, y| g.value(x, y)).unwrap();
            let mut acc = 0.0;
            for i in 0..f.nrows() {
                let r = f.row(i);
                for j in 1..r.len() - 1 {
                    acc += ((r[j + 1] - 2.0 * r[j] + r[j - 1]) / (dx * dx)).abs();
                }
            }
            let fd = acc * dx * dx;
            errs.push((fd - sobolev_data(&g, &w).unwrap().d11).abs());
        }
        // second order: halving the spacing cuts the gap by about four
        assert!(errs[1] < errs[0] / 3.0, "{errs:?}");
        assert!(errs[1] < 1e-2);
    }

    #[test]
    fn zero_function_data() {
        let w = Window::new(1.0, 0.1).unwrap();
        let d = sobolev_data(&SmoothTestFunction::zero(), &w).unwrap();
        assert_eq!(d, SobolevData { l1_norm: 0.0, d11: 0.0, d22: 0.0, d1: 0.0, d2: 0.0 });
        for r in check_section_lip_bound(&SmoothTestFunction::zero(), &w).unwrap() {
            assert_eq!(r.passed, Some(true));
        }
        for r in check_gagliardo_nirenberg(&SmoothTestFunction::zero(), &w).unwrap() {
            assert_eq!(r.empirical_ratio, Some(0.0));
        }
        assert_eq!(check_w122_into_u1(&SmoothTestFunction::zero(), &w).unwrap().empirical_ratio, Some(0.0));
    }

    #[test]
    fn small_windows_rejected() {
        assert!(sobolev_data(&SmoothTestFunction::gaussian(1.0), &Window::new(2.0, 0.1).unwrap()).is_err());
        assert!(sobolev_data(&SmoothTestFunction::product_of_bumps(1.5), &Window::new(1.0, 0.1).unwrap()).is_err());
        assert!(Window::new(1.0, 0.3).is_err());
    }

    #[test]
    fn separable_bump_section_bound() {
        let g = SmoothTestFunction::product_of_bumps(1.0);
        let w = Window::new(1.0, 0.02).unwrap();
        for r in check_section_lip_bound(&g, &w).unwrap() {
            assert_eq!(r.passed, Some(true), "{r:?}");
            assert!(r.lhs <= 0.5 * r.rhs_core);
        }
    }

    #[test]
    fn gn_dilation_invariance() {
        let g = SmoothTestFunction::gaussian(1.0);
        let w = Window::new(12.0, 0.001).unwrap();
        let base = check_gagliardo_nirenberg(&g, &w).unwrap()[0].empirical_ratio.unwrap();
        for lambda in [0.5, 2.0] {
            let r = check_gagliardo_nirenberg(&g.dilate_x(lambda), &w).unwrap()[0].empirical_ratio.unwrap();
            assert!((r - base).abs() < 1e-6, "lambda = {lambda}: {r} vs {base}");
        }
    }
}
