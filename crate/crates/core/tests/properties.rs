use mixlip::grid::{GridFunction, SampledFunction1D, SampledFunction2D};
use mixlip::mixed::u_p_norm;
use mixlip::norms::{lip_seminorm, lorentz_norm, modulus_1d, LorentzParams};
use mixlip::rearrangement::{oscillation_inequality_check, rearrange, DistributionFunction, StepProfile};
use mixlip::smoothing::steklov;
use proptest::prelude::*;

fn cells(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), Just(1.5), -5.0..5.0f64], 1..max)
}

fn dyadic() -> impl Strategy<Value = f64> {
    (0i32..5).prop_map(|k| 2f64.powi(-k))
}

fn grid_2d() -> impl Strategy<Value = SampledFunction2D> {
    (1usize..10, 1usize..10, dyadic()).prop_flat_map(|(nc, nr, dx)| {
        prop::collection::vec(-3.0..3.0f64, nc * nr)
            .prop_map(move |v| SampledFunction2D::new(0.0, 0.0, dx, nc, nr, v).unwrap())
    })
}

proptest! {
    #[test]
    fn equimeasurable(v in cells(40), dx in dyadic(), y in 0.0..6.0f64) {
        let f = SampledFunction1D::new(0.0, dx, v.clone()).unwrap();
        let lambda = DistributionFunction::of(&rearrange(&f));
        let direct = v.iter().filter(|x| x.abs() > y).count() as f64 * dx;
        prop_assert!((lambda.eval(y).unwrap() - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn mass_is_preserved(v in cells(40), dx in dyadic()) {
        let f = SampledFunction1D::new(0.0, dx, v.clone()).unwrap();
        let mass: f64 = v.iter().map(|x| x.abs()).sum::<f64>() * dx;
        let prof = rearrange(&f);
        prop_assert!((prof.total_mass() - mass).abs() <= 1e-12 * mass.max(1.0));
        prop_assert!((prof.integral_to(f64::INFINITY) - mass).abs() <= 1e-12 * mass.max(1.0));
    }

    #[test]
    fn star_below_double_star(v in cells(30), t in 0.01..40.0f64) {
        let prof = StepProfile::from_cells(&v, 0.5);
        let s = prof.evaluate_star(t).unwrap();
        let ss = prof.double_star(t).unwrap();
        prop_assert!(s <= ss + 1e-12 * ss.max(1.0));
        prop_assert!(prof.double_star(2.0 * t).unwrap() <= ss + 1e-12 * ss.max(1.0));
    }

    #[test]
    fn oscillation_inequality(v in cells(30), a in 0.001..20.0f64, b in 0.001..20.0f64) {
        prop_assume!(a != b);
        let prof = StepProfile::from_cells(&v, 0.25);
        let r = oscillation_inequality_check(&prof, a.min(b), a.max(b)).unwrap();
        prop_assert_eq!(r.passed, Some(true));
    }

    #[test]
    fn lorentz_is_homogeneous_and_nested(v in cells(30), p in 1.0..4.0f64, lam in 0.1..10.0f64) {
        let prof = StepProfile::from_cells(&v, 0.5);
        let scaled = StepProfile::from_cells(&v.iter().map(|x| x * lam).collect::<Vec<_>>(), 0.5);
        let q1 = LorentzParams::new(p, 1.0).unwrap();
        let a = lorentz_norm(&prof, q1);
        prop_assert!((lorentz_norm(&scaled, q1) - lam * a).abs() <= 1e-10 * (lam * a).max(1.0));
        // the q = 1 norm dominates q = p with constant p^{1/p - 1} <= 1
        let lp = lorentz_norm(&prof, LorentzParams::new(p, p).unwrap());
        prop_assert!(lp <= a * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn lip_homogeneity(v in cells(30), dx in dyadic(), alpha in 0.05..=1.0f64, lam in -4.0..4.0f64) {
        let f = SampledFunction1D::new(0.0, dx, v).unwrap();
        let a = lip_seminorm(&f, alpha).unwrap().seminorm;
        let b = lip_seminorm(&f.scaled(lam), alpha).unwrap().seminorm;
        prop_assert!((b - lam.abs() * a).abs() <= 1e-12 * a.max(1.0) * lam.abs().max(1.0));
    }

    #[test]
    fn modulus_below_seminorm_power(v in cells(30), dx in dyadic(), alpha in 0.05..=1.0f64, k in 1usize..40) {
        let f = SampledFunction1D::new(0.0, dx, v).unwrap();
        let semi = lip_seminorm(&f, alpha).unwrap().seminorm;
        let t = k as f64 * dx;
        let w = modulus_1d(&f, t).unwrap();
        prop_assert!(w <= semi * t.powf(alpha) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn modulus_subadditive(v in cells(30), k in 1usize..20) {
        let f = SampledFunction1D::new(0.0, 0.125, v).unwrap();
        let t = k as f64 * 0.125;
        let w1 = modulus_1d(&f, t).unwrap();
        let w2 = modulus_1d(&f, 2.0 * t).unwrap();
        prop_assert!(w1 <= w2);
        prop_assert!(w2 <= 2.0 * w1 + 1e-12);
    }

    #[test]
    fn steklov_preserves_integral(f in grid_2d(), m in 1usize..5) {
        let avg = steklov(&f, m as f64 * f.spacing()).unwrap();
        let a: f64 = f.values().iter().sum();
        let b: f64 = avg.result.values().iter().sum();
        prop_assert!((a - b).abs() <= 1e-10 * f.values().iter().map(|x| x.abs()).sum::<f64>().max(1.0));
        prop_assert!(avg.result.sup_norm() <= f.sup_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn up_norm_transpose_symmetric(f in grid_2d(), p in 1.0..4.0f64) {
        let a = u_p_norm(&f, p).unwrap().u_p_norm;
        let b = u_p_norm(&f.transpose(), p).unwrap().u_p_norm;
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }
}
