//! Boundedness, continuity and embedding inequalities for the mixed
//! Lipschitz norms.
//!
//! Inequalities with a stated constant produce hard verdicts. Where the
//! constant is unspecified the record carries the ratio `lhs / rhs_core`,
//! and refinement studies watch that ratio for drift.

use crate::error::{domain, Result};
use crate::grid::{GridFunction, SampledFunction1D, SampledFunction2D};
use crate::mixed::{seminorm_profiles, u_p_norm};
use crate::norms::{lorentz_norm, modulus_1d, LorentzParams};
use crate::rearrangement::StepProfile;
use crate::verdict::VerdictRecord;

/// Slack for the explicit two-term sup bound.
pub const TWO_TERM_TOL: f64 = 1e-12;
/// Slack for the embedding intermediate, relative to `max(1, rhs)`.
pub const EMBEDDING_TOL: f64 = 1e-10;

/// Rearrangements of `f` and of its order-`1/p` seminorm profiles.
#[derive(Clone, Debug)]
pub struct TheoremChecks<'a> {
    f: &'a SampledFunction2D,
    p: f64,
    fstar: StepProfile,
    phi1: StepProfile,
    phi2: StepProfile,
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        domain(format!("p must be >= 1, got {p}"))
    }
}

impl<'a> TheoremChecks<'a> {
    pub fn new(f: &'a SampledFunction2D, p: f64) -> Result<Self> {
        check_p(p)?;
        let (phi1, phi2) = seminorm_profiles(f, 1.0 / p)?;
        Ok(Self {
            f,
            p,
            fstar: StepProfile::from_grid(f),
            phi1: StepProfile::from_grid(&phi1),
            phi2: StepProfile::from_grid(&phi2),
        })
    }

    pub fn phi_profiles(&self) -> (&StepProfile, &StepProfile) {
        (&self.phi1, &self.phi2)
    }

    /// `f*(t) - f*(2t)` against `t^{1/(2p)} [phi1*(sqrt(t)/2) + phi2*(sqrt(t)/2)]`.
    pub fn oscillation_main(&self, t: f64) -> Result<VerdictRecord> {
        if !(t > 0.0) {
            return domain(format!("t must be positive, got {t}"));
        }
        let lhs = self.fstar.value_at(t) - self.fstar.value_at(2.0 * t);
        let s = t.sqrt() / 2.0;
        let rhs = t.powf(0.5 / self.p) * (self.phi1.value_at(s) + self.phi2.value_at(s));
        Ok(VerdictRecord::empirical("oscillation_main", lhs, rhs, self.f.spacing())
            .with_param("p", self.p)
            .with_param("t", t))
    }

    /// `||f||_inf` against `||phi1||_{p,1} + ||phi2||_{p,1}`.
    pub fn sup_bound(&self) -> Result<VerdictRecord> {
        let params = LorentzParams::new(self.p, 1.0)?;
        let rhs = lorentz_norm(&self.phi1, params) + lorentz_norm(&self.phi2, params);
        Ok(VerdictRecord::empirical("sup_bound", self.f.sup_norm(), rhs, self.f.spacing()).with_param("p", self.p))
    }

    /// `omega(f; delta)` against `int_0^delta [phi1* + phi2*] t^{1/p - 1} dt`.
    pub fn modulus_bound(&self, delta: f64) -> Result<VerdictRecord> {
        if !(delta > 0.0) {
            return domain(format!("delta must be positive, got {delta}"));
        }
        let lhs = crate::norms::modulus_2d(self.f, delta)?;
        let gamma = 1.0 / self.p;
        let rhs = self.phi1.power_integral(gamma, 0.0, delta) + self.phi2.power_integral(gamma, 0.0, delta);
        Ok(VerdictRecord::empirical("modulus_bound", lhs, rhs, self.f.spacing())
            .with_param("p", self.p)
            .with_param("delta", delta))
    }
}

pub fn check_oscillation_main(f: &SampledFunction2D, p: f64, t: f64) -> Result<VerdictRecord> {
    TheoremChecks::new(f, p)?.oscillation_main(t)
}

pub fn check_sup_bound(f: &SampledFunction2D, p: f64) -> Result<VerdictRecord> {
    TheoremChecks::new(f, p)?.sup_bound()
}

pub fn check_modulus_bound(f: &SampledFunction2D, p: f64, delta: f64) -> Result<VerdictRecord> {
    TheoremChecks::new(f, p)?.modulus_bound(delta)
}

/// `||phi_{r,1}||_{r,1} + ||phi_{r,2}||_{r,1}` with seminorms of order `1/r`.
pub fn seminorm_lorentz_sum(f: &SampledFunction2D, r: f64) -> Result<f64> {
    let (a, b) = seminorm_profiles(f, 1.0 / r)?;
    let params = LorentzParams::new(r, 1.0)?;
    Ok(lorentz_norm(&StepProfile::from_grid(&a), params) + lorentz_norm(&StepProfile::from_grid(&b), params))
}

/// `||f||_{U_q}` against `||f||_{U_p}` (ratio study), plus the hard
/// intermediate `sum_i ||phi_{q,i}||_{q,1} <= 2^7 q sum_i ||phi_{p,i}||_{p,1}`.
pub fn check_up_embedding(f: &SampledFunction2D, p: f64, q: f64) -> Result<Vec<VerdictRecord>> {
    check_p(p)?;
    if !(q.is_finite() && p < q) {
        return domain(format!("embedding needs 1 <= p < q < inf, got p = {p}, q = {q}"));
    }
    let uq = u_p_norm(f, q)?.u_p_norm;
    let up = u_p_norm(f, p)?.u_p_norm;
    let dx = f.spacing();
    let ratio = VerdictRecord::empirical("up_embedding", uq, up, dx).with_param("p", p).with_param("q", q);
    let lhs = seminorm_lorentz_sum(f, q)?;
    let rhs = seminorm_lorentz_sum(f, p)?;
    let tol = EMBEDDING_TOL * rhs.max(1.0);
    let hard = VerdictRecord::explicit("up_embedding_intermediate", lhs, rhs, 128.0 * q, tol, dx)
        .with_param("p", p)
        .with_param("q", q);
    Ok(vec![ratio, hard])
}

/// `||phi||_inf <= phi*(t) + 2 omega(phi; t)`.
///
/// The record also stores the intermediate `phi*(t) + omega(phi; 2t)` under
/// the `via_omega_2t` parameter.
pub fn two_term_sup_bound_check(phi: &SampledFunction1D, t: f64) -> Result<VerdictRecord> {
    if !(t > 0.0) {
        return domain(format!("t must be positive, got {t}"));
    }
    let star = StepProfile::from_grid(phi).value_at(t);
    let w = modulus_1d(phi, t)?;
    let w2 = modulus_1d(phi, 2.0 * t)?;
    let rhs = star + 2.0 * w;
    Ok(VerdictRecord::explicit("two_term_sup_bound", phi.sup_norm(), rhs, 1.0, TWO_TERM_TOL, phi.spacing())
        .with_param("t", t)
        .with_param("via_omega_2t", star + w2))
}
