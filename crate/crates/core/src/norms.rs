//! Lorentz norms of step profiles; Lipschitz seminorms and moduli of
//! continuity of grid functions.
//!
//! Differences `Delta_h phi(x) = phi(x + h) - phi(x)` are taken with the
//! zero extension of `phi` and shifts restricted to multiples of the grid
//! spacing. For a cell-constant function the continuous seminorm is infinite
//! as soon as there is a jump, so the discrete value reported here is a lower
//! bound that converges under refinement for Lipschitz inputs.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::grid::{GridFunction, SampledFunction1D, SampledFunction2D};
use crate::numeric::floor_multiple;
use crate::rearrangement::StepProfile;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzParams {
    p: f64,
    q: f64,
}

impl LorentzParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0 && q.is_finite() && q >= 1.0) {
            return domain(format!("Lorentz indices must lie in [1, inf), got ({p}, {q})"));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// `(int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}`, summed piece by piece:
/// a piece of height `v` on `[a, b)` contributes `v^q (p/q) (b^{q/p} - a^{q/p})`.
pub fn lorentz_norm(profile: &StepProfile, params: LorentzParams) -> f64 {
    let LorentzParams { p, q } = params;
    let r = q / p;
    let mut acc = 0.0;
    let mut start = 0.0f64;
    for (&v, &e) in profile.values().iter().zip(profile.ends()) {
        acc += v.powf(q) * (e.powf(r) - start.powf(r));
        start = e;
    }
    (acc * p / q).powf(1.0 / q)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipReport {
    pub alpha: f64,
    pub sup_norm: f64,
    pub seminorm: f64,
    /// Shift at which the discrete supremum is attained.
    pub witness_shift: f64,
}

impl LipReport {
    /// `||phi||_inf + ||phi||*_{Lip alpha}`.
    pub fn norm(&self) -> f64 {
        self.sup_norm + self.seminorm
    }
}

/// Running maxima of `|v|` from the left and from the right.
struct AbsEnvelope {
    prefix: Vec<f64>,
    suffix: Vec<f64>,
}

impl AbsEnvelope {
    fn new(values: &[f64]) -> Self {
        let n = values.len();
        let mut prefix = vec![0.0f64; n + 1];
        let mut suffix = vec![0.0f64; n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i].max(values[i].abs());
            suffix[n - 1 - i] = suffix[n - i].max(values[n - 1 - i].abs());
        }
        Self { prefix, suffix }
    }
}

/// `||Delta_{k cells} v||_inf` under the zero extension.
fn shift_sup(values: &[f64], env: &AbsEnvelope, k: usize) -> f64 {
    let n = values.len();
    if k == 0 {
        return 0.0;
    }
    if k >= n {
        return env.prefix[n];
    }
    // cells entering from the left and leaving on the right see a zero partner
    let mut m = env.prefix[k].max(env.suffix[n - k]);
    for (a, b) in values[k..].iter().zip(&values[..n - k]) {
        m = m.max((a - b).abs());
    }
    m
}

/// `||Delta_{kh} v||_inf` for `k = 0..=kmax`.
pub fn shift_sup_norms(values: &[f64], kmax: usize) -> Vec<f64> {
    let env = AbsEnvelope::new(values);
    (0..=kmax).map(|k| shift_sup(values, &env, k)).collect()
}

/// Discrete `sup_h h^{-alpha} ||Delta_h v||_inf` over `h = k * spacing`,
/// returning `(seminorm, witness k)`.
///
/// `||Delta_h v||_inf` never exceeds the oscillation `max(v, 0) - min(v, 0)`
/// of the zero-extended function, so once `(k spacing)^{-alpha}` times that
/// bound drops below the running best no larger shift can win. For
/// `k >= len` the difference is `||v||_inf` and `h^{-alpha}` is decreasing,
/// so scanning `k <= len` is exhaustive.
pub(crate) fn seminorm_scan(values: &[f64], spacing: f64, alpha: f64) -> (f64, usize) {
    let env = AbsEnvelope::new(values);
    let hi = values.iter().fold(0.0f64, |m, &v| m.max(v));
    let lo = values.iter().fold(0.0f64, |m, &v| m.min(v));
    let osc = hi - lo;
    let mut best = 0.0;
    let mut witness = 1;
    if osc == 0.0 {
        return (0.0, 1);
    }
    for k in 1..=values.len() {
        let weight = (k as f64 * spacing).powf(-alpha);
        if weight * osc <= best {
            break;
        }
        let s = weight * shift_sup(values, &env, k);
        if s > best {
            best = s;
            witness = k;
        }
    }
    (best, witness)
}

pub fn lip_seminorm(phi: &SampledFunction1D, alpha: f64) -> Result<LipReport> {
    check_alpha(alpha)?;
    let (seminorm, k) = seminorm_scan(phi.values(), phi.spacing(), alpha);
    Ok(LipReport { alpha, sup_norm: phi.sup_norm(), seminorm, witness_shift: k as f64 * phi.spacing() })
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        domain(format!("Lipschitz order must lie in (0, 1], got {alpha}"))
    }
}

/// `omega(phi; t) = sup_{0 <= h <= t} ||Delta_h phi||_inf` over grid shifts.
pub fn modulus_1d(phi: &SampledFunction1D, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("modulus of continuity needs t >= 0, got {t}"));
    }
    let kmax = floor_multiple(t, phi.spacing()).min(phi.len());
    Ok(shift_sup_norms(phi.values(), kmax).into_iter().fold(0.0, f64::max))
}

/// `omega(f; delta) = sup_{0 <= h, k <= delta} sup_{x,y} |f(x+h, y+k) - f(x, y)|`
/// over grid shift pairs.
pub fn modulus_2d(f: &SampledFunction2D, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return domain(format!("modulus of continuity needs delta >= 0, got {delta}"));
    }
    let k = floor_multiple(delta, f.spacing());
    let (ncols, nrows) = (f.ncols() as isize, f.nrows() as isize);
    let amax = k.min(f.ncols()) as isize;
    let bmax = k.min(f.nrows()) as isize;
    let mut best = 0.0f64;
    for b in 0..=bmax {
        for a in 0..=amax {
            if a == 0 && b == 0 {
                continue;
            }
            for i in -b..nrows {
                for j in -a..ncols {
                    let d = (f.get_ext(i + b, j + a) - f.get_ext(i, j)).abs();
                    best = best.max(d);
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrangement::rearrange;

    fn lp(v: f64) -> LorentzParams {
        LorentzParams::new(v, v).unwrap()
    }

    #[test]
    fn lorentz_params_validated() {
        assert!(LorentzParams::new(0.5, 1.0).is_err());
        assert!(LorentzParams::new(1.0, f64::INFINITY).is_err());
        assert!(LorentzParams::new(2.0, 1.0).is_ok());
    }

    #[test]
    fn lorentz_indicator_and_worked_example() {
        let ind = StepProfile::from_pieces(&[(1.0, 3.0)]).unwrap();
        assert!((lorentz_norm(&ind, lp(1.0)) - 3.0).abs() < 1e-15);
        // int_0^L (t^{1/p})^q dt/t = (p/q) L^{q/p}
        let v = lorentz_norm(&ind, LorentzParams::new(2.0, 3.0).unwrap());
        assert!((v - ((2.0 / 3.0) * 3f64.powf(1.5)).powf(1.0 / 3.0)).abs() < 1e-14);
        let two = StepProfile::from_pieces(&[(2.0, 1.0), (1.0, 1.0)]).unwrap();
        let want = 4.0 + 2.0 * (2f64.sqrt() - 1.0);
        assert!((lorentz_norm(&two, LorentzParams::new(2.0, 1.0).unwrap()) - want).abs() < 1e-14);
        assert_eq!(lorentz_norm(&StepProfile::zero(), lp(2.0)), 0.0);
    }

    #[test]
    fn lorentz_pp_is_lp() {
        let f = SampledFunction1D::new(0.0, 0.1, vec![0.5, -2.0, 1.5, 0.0, 3.0]).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0] {
            let direct: f64 = f.values().iter().map(|v| v.abs().powf(p) * 0.1).sum::<f64>().powf(1.0 / p);
            let lor = lorentz_norm(&rearrange(&f), lp(p));
            assert!((lor - direct).abs() <= 1e-12 * direct, "p = {p}");
        }
    }

    #[test]
    fn lip_of_zero_and_single_cell() {
        let z = SampledFunction1D::zeros(0.0, 0.5, 6).unwrap();
        let r = lip_seminorm(&z, 0.5).unwrap();
        assert_eq!((r.seminorm, r.sup_norm), (0.0, 0.0));
        assert!(r.witness_shift > 0.0);
        let dx = 0.125;
        let one = SampledFunction1D::new(0.0, dx, vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let r = lip_seminorm(&one, 1.0).unwrap();
        assert_eq!(r.seminorm, 1.0 / dx);
        assert_eq!(r.witness_shift, dx);
        assert_eq!(r.norm(), 1.0 + 1.0 / dx);
    }

    #[test]
    fn lip_alpha_domain() {
        let z = SampledFunction1D::zeros(0.0, 0.5, 2).unwrap();
        assert!(lip_seminorm(&z, 0.0).is_err());
        assert!(lip_seminorm(&z, 1.5).is_err());
        assert!(lip_seminorm(&z, 1.0).is_ok());
    }

    #[test]
    fn hat_slope_under_refinement() {
        for n in [16usize, 64, 256] {
            let dx = 4.0 / n as f64;
            let hat = SampledFunction1D::from_fn(-2.0, dx, n, |x| (1.0 - x.abs()).max(0.0)).unwrap();
            let r = lip_seminorm(&hat, 1.0).unwrap();
            assert!((r.seminorm - 1.0).abs() <= 2.0 * dx, "n = {n}: {}", r.seminorm);
        }
    }

    #[test]
    fn modulus_basics() {
        let f = SampledFunction1D::new(0.0, 0.5, vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(modulus_1d(&f, 0.0).unwrap(), 0.0);
        // shift one cell: |3-1|, |2-3|, boundary |1|, |2|
        assert_eq!(modulus_1d(&f, 0.5).unwrap(), 2.0);
        assert_eq!(modulus_1d(&f, 0.49).unwrap(), 0.0);
        assert_eq!(modulus_1d(&f, 10.0).unwrap(), 3.0);
        assert!(modulus_1d(&f, -1.0).is_err());
        let g = SampledFunction2D::new(0.0, 0.0, 1.0, 2, 1, vec![1.0, 4.0]).unwrap();
        assert_eq!(modulus_2d(&g, 0.0).unwrap(), 0.0);
        assert_eq!(modulus_2d(&g, 1.0).unwrap(), 4.0);
        assert!(modulus_2d(&g, -0.5).is_err());
    }

    #[test]
    fn shift_sup_matches_definition() {
        let v = [1.0, -2.0, 0.5, 3.0];
        let d = shift_sup_norms(&v, 6);
        for (k, &dk) in d.iter().enumerate() {
            let at = |i: isize| if i >= 0 && (i as usize) < v.len() { v[i as usize] } else { 0.0 };
            let brute = (-(k as isize) - 1..v.len() as isize + 1)
                .map(|i| (at(i + k as isize) - at(i)).abs())
                .fold(0.0, f64::max);
            assert_eq!(dk, brute, "k = {k}");
        }
    }
}
