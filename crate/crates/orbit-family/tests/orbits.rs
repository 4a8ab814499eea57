use orbit_family::*;
use params_core::{f, DerivedConstants, Params, F0};
use proptest::prelude::*;
use std::f64::consts::PI;

fn canon() -> Params {
    Params::canonical()
}

#[test]
fn roots_at_sigma_002() {
    let (a, b) = level_roots(&canon(), 0.02).unwrap();
    assert!((a - 0.316228).abs() < 1e-6, "{a}");
    assert!((b - 0.632456).abs() < 1e-6, "{b}");
    assert!((a - 0.1f64.sqrt()).abs() < 1e-13);
    assert!((b - 0.4f64.sqrt()).abs() < 1e-13);
}

#[test]
fn roots_reject_out_of_range() {
    let p = canon();
    assert!(level_roots(&p, 0.0).is_err());
    assert!(level_roots(&p, 0.04).is_err());
    assert_eq!(level_roots(&p, 0.03125).unwrap(), (0.5, 0.5));
}

#[test]
fn sigma_bar_agrees() {
    let p = canon();
    assert!((sigma_bar(&p) - 0.03125).abs() < 1e-15);
    assert!(sigma_bar_matches(&p, &DerivedConstants::derive(&p).unwrap()));
}

#[test]
fn half_period_matches_integration() {
    let p = canon();
    for sigma in [0.001, 0.01, 0.02, 0.03, 0.0312] {
        let quad = 2.0 * half_period(&p, sigma).unwrap();
        let ode = measured_period(&p, sigma).unwrap();
        assert!((quad - ode).abs() < 1e-6, "sigma {sigma}: {quad} vs {ode}");
    }
}

#[test]
fn period_tends_to_linearised_value() {
    let p = canon();
    let lim = limiting_period(&p);
    assert!((lim - 8.885766).abs() < 1e-6);
    let near = 2.0 * half_period(&p, 0.03125 - 1e-6).unwrap();
    assert!((near - lim).abs() < 1e-3, "{near}");
}

#[test]
fn orbit_is_periodic_and_conserves_energy() {
    let p = canon();
    let d = OrbitData::build(&p, 0.02).unwrap();
    let per = d.period();
    for &t in &[0.0, 0.3, 1.7, 4.2, 7.9] {
        let (u, v) = d.eval(t, 0.9);
        let (u2, v2) = d.eval(t + 7.0 * per, 0.9);
        assert!((u - u2).abs() < 1e-9 && (v - v2).abs() < 1e-9);
        assert!((F0(&p, u) - v * v - 0.02).abs() < 1e-9);
    }
    let (u0, v0) = d.eval(0.0, 0.0);
    assert!((u0 - d.a_sigma).abs() < 1e-14 && v0.abs() < 1e-14);
}

#[test]
fn phase_angle_pi_starts_at_maximum() {
    let p = canon();
    let spec = OrbitSpec::new(&p, 0.02, PI).unwrap();
    let (u, v) = orbit_eval(&p, &spec, 0.0).unwrap();
    assert!((u - 0.4f64.sqrt()).abs() < 1e-9 && v.abs() < 1e-9);
}

#[test]
fn constant_orbit_at_sigma_bar() {
    let p = canon();
    let spec = OrbitSpec::new(&p, 0.03125, 1.0).unwrap();
    let (u, v) = orbit_eval(&p, &spec, 3.3).unwrap();
    assert_eq!((u, v), (0.5, 0.0));
    assert!(matches!(orbit_sigma_derivative(&p, &spec, 0.0), Err(OrbitError::NearMaximum { .. })));
    assert!(OrbitSpec::new(&p, 0.04, 0.0).is_err());
}

#[test]
fn wronskian_of_tangent_vectors() {
    let p = canon();
    let d = OrbitData::build(&p, 0.02).unwrap();
    for &tau in &[0.0, 1.0, 4.0] {
        for &t in &[0.0, 0.5, 2.5, 6.1, 13.0, 40.0] {
            let (u, v) = d.eval(t, tau);
            let (su, sv) = d.sigma_derivative(t, tau).unwrap();
            let det = v * sv - f(&p, u) * su;
            assert!((det + 0.5).abs() < 1e-7, "t={t} tau={tau} det={det}");
        }
    }
}

#[test]
fn sigma_derivative_matches_finite_difference() {
    let p = canon();
    let sigma = 0.015;
    let h = 1e-6;
    let d0 = OrbitData::build(&p, sigma).unwrap();
    let dp = OrbitData::build(&p, sigma + h).unwrap();
    let dm = OrbitData::build(&p, sigma - h).unwrap();
    for &tau in &[0.0, 2.0] {
        for &t in &[0.4, 3.0, 9.0, 25.0] {
            let (su, sv) = d0.sigma_derivative(t, tau).unwrap();
            let fu = (dp.eval(t, tau).0 - dm.eval(t, tau).0) / (2.0 * h);
            let fv = (dp.eval(t, tau).1 - dm.eval(t, tau).1) / (2.0 * h);
            assert!((su - fu).abs() < 1e-4 * (1.0 + su.abs()), "t={t}: {su} vs {fu}");
            assert!((sv - fv).abs() < 1e-4 * (1.0 + sv.abs()), "t={t}: {sv} vs {fv}");
        }
    }
}

#[test]
fn period_derivative_matches_quadrature() {
    let p = canon();
    let d = OrbitData::build(&p, 0.02).unwrap();
    let h = 1e-6;
    let fd = (half_period(&p, 0.02 + h).unwrap() - half_period(&p, 0.02 - h).unwrap()) / h;
    let pd = d.period_derivative.unwrap();
    assert!((pd - fd).abs() < 1e-5 * pd.abs().max(1.0), "{pd} vs {fd}");
}

#[test]
fn near_maximum_margin_is_enforced() {
    let p = canon();
    let sb = sigma_bar(&p);
    let spec = OrbitSpec::new(&p, sb * (1.0 - 1e-5), 0.0).unwrap();
    assert!(orbit_sigma_derivative(&p, &spec, 0.0).is_err());
    let spec = OrbitSpec::new(&p, sb * (1.0 - 1e-3), 0.0).unwrap();
    assert!(orbit_sigma_derivative(&p, &spec, 0.0).is_ok());
}

#[test]
fn tau_derivative_is_minus_scaled_velocity() {
    let p = canon();
    let d = OrbitData::build(&p, 0.02).unwrap();
    let h = 1e-6;
    let (a, b) = d.tau_derivative(1.3, 0.7);
    let fa = (d.eval(1.3, 0.7 + h).0 - d.eval(1.3, 0.7 - h).0) / (2.0 * h);
    let fb = (d.eval(1.3, 0.7 + h).1 - d.eval(1.3, 0.7 - h).1) / (2.0 * h);
    assert!((a - fa).abs() < 1e-6 && (b - fb).abs() < 1e-6);
}

#[test]
fn cache_reuses_entries_across_threads() {
    use rayon::prelude::*;
    let cache = OrbitCache::new(canon(), 0.0);
    let vals: Vec<f64> = (0..64)
        .into_par_iter()
        .map(|i| cache.get(0.01 + 0.001 * (i % 4) as f64).unwrap().t_sigma)
        .collect();
    assert_eq!(cache.len(), 4);
    for (i, v) in vals.iter().enumerate() {
        assert_eq!(*v, half_period(&canon(), 0.01 + 0.001 * (i % 4) as f64).unwrap());
    }
    let snapped = OrbitCache::new(canon(), 1e-3);
    let a = snapped.get(0.01004).unwrap();
    let b = snapped.get(0.00996).unwrap();
    assert!(std::sync::Arc::ptr_eq(&a, &b));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn roots_solve_level_equation(frac in 0.01f64..0.99) {
        let p = canon();
        let sigma = frac * sigma_bar(&p);
        let (a, b) = level_roots(&p, sigma).unwrap();
        prop_assert!(a < 0.5 && b > 0.5);
        prop_assert!((F0(&p, a) - sigma).abs() < 1e-14);
        prop_assert!((F0(&p, b) - sigma).abs() < 1e-14);
    }

    #[test]
    fn period_is_monotone_in_sigma(f1 in 0.05f64..0.9, df in 0.01f64..0.09) {
        let p = canon();
        let sb = sigma_bar(&p);
        let t1 = half_period(&p, f1 * sb).unwrap();
        let t2 = half_period(&p, (f1 + df) * sb).unwrap();
        prop_assert!(t2 < t1);
    }
}
