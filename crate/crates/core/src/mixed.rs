//! Lipschitz norms of sections and the symmetric mixed norm
//! `||f||_{U_p} = ||N1||_{p,1} + ||N2||_{p,1}` with `N1(y) = ||f(., y)||_{Lip 1/p}`
//! and `N2(x) = ||f(x, .)||_{Lip 1/p}`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::grid::{SampledFunction1D, SampledFunction2D};
use crate::norms::{check_alpha, lorentz_norm, seminorm_scan, LorentzParams};
use crate::rearrangement::StepProfile;

/// Per-section seminorms (`phi*`) and sup norms (`psi*`).
///
/// `phi1`, `psi1` live on the y-axis (one value per row, i.e. per y-section
/// `x -> f(x, y)`); `phi2`, `psi2` live on the x-axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionProfiles {
    pub phi1: SampledFunction1D,
    pub phi2: SampledFunction1D,
    pub psi1: SampledFunction1D,
    pub psi2: SampledFunction1D,
    pub alpha: f64,
}

impl SectionProfiles {
    /// `y -> ||f_y||_{Lip alpha}`.
    pub fn full_norm1(&self) -> SampledFunction1D {
        sum(&self.phi1, &self.psi1)
    }

    /// `x -> ||f_x||_{Lip alpha}`.
    pub fn full_norm2(&self) -> SampledFunction1D {
        sum(&self.phi2, &self.psi2)
    }
}

fn sum(a: &SampledFunction1D, b: &SampledFunction1D) -> SampledFunction1D {
    let values = a.values().iter().zip(b.values()).map(|(x, y)| x + y).collect();
    SampledFunction1D::new(a.origin(), a.spacing(), values).expect("profiles share a grid")
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn column(f: &SampledFunction2D, j: usize) -> Vec<f64> {
    (0..f.nrows()).map(|i| f.get(i, j)).collect()
}

/// Seminorm profiles `(phi1, phi2)` of order `alpha` without the sup parts.
pub fn seminorm_profiles(f: &SampledFunction2D, alpha: f64) -> Result<(SampledFunction1D, SampledFunction1D)> {
    check_alpha(alpha)?;
    let dx = f.spacing();
    let phi1 = (0..f.nrows()).map(|i| seminorm_scan(f.row(i), dx, alpha).0).collect();
    let phi2 = (0..f.ncols()).map(|j| seminorm_scan(&column(f, j), dx, alpha).0).collect();
    Ok((
        SampledFunction1D::new(f.origin_y(), dx, phi1)?,
        SampledFunction1D::new(f.origin_x(), dx, phi2)?,
    ))
}

pub fn section_profiles(f: &SampledFunction2D, alpha: f64) -> Result<SectionProfiles> {
    let (phi1, phi2) = seminorm_profiles(f, alpha)?;
    let dx = f.spacing();
    let psi1 = (0..f.nrows()).map(|i| sup_abs(f.row(i))).collect();
    let psi2 = (0..f.ncols()).map(|j| sup_abs(&column(f, j))).collect();
    Ok(SectionProfiles {
        phi1,
        phi2,
        psi1: SampledFunction1D::new(f.origin_y(), dx, psi1)?,
        psi2: SampledFunction1D::new(f.origin_x(), dx, psi2)?,
        alpha,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedNormReport {
    pub p: f64,
    pub u_p_norm: f64,
    /// `||N1||_{p,1}` with the full Lip norm of y-sections.
    pub n1_lorentz: f64,
    pub n2_lorentz: f64,
    /// `||phi1||_{p,1}` with the seminorm only.
    pub phi1_lorentz: f64,
    pub phi2_lorentz: f64,
}

pub fn u_p_norm(f: &SampledFunction2D, p: f64) -> Result<MixedNormReport> {
    if !(p.is_finite() && p >= 1.0) {
        return domain(format!("U_p needs p >= 1, got {p}"));
    }
    let prof = section_profiles(f, 1.0 / p)?;
    let params = LorentzParams::new(p, 1.0)?;
    let norm = |g: &SampledFunction1D| lorentz_norm(&StepProfile::from_grid(g), params);
    let n1 = norm(&prof.full_norm1());
    let n2 = norm(&prof.full_norm2());
    Ok(MixedNormReport {
        p,
        u_p_norm: n1 + n2,
        n1_lorentz: n1,
        n2_lorentz: n2,
        phi1_lorentz: norm(&prof.phi1),
        phi2_lorentz: norm(&prof.phi2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::lip_seminorm;

    #[test]
    fn zero_function() {
        let f = SampledFunction2D::zeros(0.0, 0.0, 0.25, 5, 4).unwrap();
        let s = section_profiles(&f, 0.5).unwrap();
        for g in [&s.phi1, &s.phi2, &s.psi1, &s.psi2] {
            assert!(g.values().iter().all(|&v| v == 0.0));
        }
        assert_eq!(s.phi1.len(), 4);
        assert_eq!(s.phi2.len(), 5);
        assert_eq!(u_p_norm(&f, 2.0).unwrap().u_p_norm, 0.0);
    }

    #[test]
    fn separable_profiles() {
        let dx = 0.1;
        let g = SampledFunction1D::from_fn(0.0, dx, 12, |x| (x * 2.5).sin().max(0.0)).unwrap();
        let h: Vec<f64> = vec![0.0, 1.0, -2.0, 0.5, 3.0];
        let mut vals = Vec::new();
        for hv in &h {
            vals.extend(g.values().iter().map(|gv| gv * hv));
        }
        let f = SampledFunction2D::new(0.0, 0.0, dx, 12, 5, vals).unwrap();
        let s = section_profiles(&f, 0.5).unwrap();
        let lg = lip_seminorm(&g, 0.5).unwrap();
        for (i, hv) in h.iter().enumerate() {
            let want = hv.abs() * lg.seminorm;
            assert!((s.phi1.values()[i] - want).abs() <= 1e-12 * want.max(1.0));
            assert!((s.psi1.values()[i] - hv.abs() * lg.sup_norm).abs() <= 1e-15);
        }
    }

    #[test]
    fn single_cell_profile() {
        let dx = 0.25;
        let mut vals = vec![0.0; 16];
        vals[4 + 2] = 3.0;
        let f = SampledFunction2D::new(0.0, 0.0, dx, 4, 4, vals).unwrap();
        let s = section_profiles(&f, 0.5).unwrap();
        let want = 3.0 / dx.sqrt();
        assert_eq!(s.phi2.values(), &[0.0, 0.0, want, 0.0]);
        assert_eq!(s.phi1.values(), &[0.0, want, 0.0, 0.0]);
        assert_eq!(s.full_norm2().values()[2], want + 3.0);
    }

    #[test]
    fn homogeneity_and_symmetry() {
        let f = SampledFunction2D::from_fn(0.0, 0.0, 0.1, 9, 7, |x, y| (x * 3.0).sin() * (y * 4.0 - x).cos()).unwrap();
        let a = u_p_norm(&f, 2.0).unwrap();
        let b = u_p_norm(&f.scaled(2.5), 2.0).unwrap();
        assert!((b.u_p_norm - 2.5 * a.u_p_norm).abs() <= 1e-12 * b.u_p_norm);
        let t = u_p_norm(&f.transpose(), 2.0).unwrap();
        assert!((t.u_p_norm - a.u_p_norm).abs() <= 1e-12 * a.u_p_norm);
        assert_eq!(t.n1_lorentz, a.n2_lorentz);
        assert!(u_p_norm(&f, 0.5).is_err());
    }
}
