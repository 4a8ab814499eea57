use nd_solver::*;
use params_core::Params;
use proptest::prelude::*;
use radial_integrator::{rhs_eval, Chart, State};
use std::sync::OnceLock;

fn canonical_grid() -> &'static ManifoldGrid {
    static G: OnceLock<ManifoldGrid> = OnceLock::new();
    G.get_or_init(|| manifold_fixed_point(&Params::canonical(), &NdConfig::default()).unwrap())
}

fn constants() -> (Params, NdConstants) {
    let p = Params::canonical();
    (p, NdConstants::new(&p).unwrap())
}

#[test]
fn origin_is_critical_point() {
    let (p, c) = constants();
    assert_eq!(nd_rhs(&p, &c, H3Variant::Raw, [0.0; 3]), [0.0; 3]);
    assert_eq!(nd_rhs(&p, &c, H3Variant::Regularized { epsilon: 0.5 }, [0.0; 3]), [0.0; 3]);
}

#[test]
fn canonical_constants() {
    let (_, c) = constants();
    assert!((c.lambda1 - 7.348469).abs() < 1e-6);
    assert!((c.upsilon - 1.224745).abs() < 1e-6);
    assert!((c.gamma - 2.0 / 9.0).abs() < 1e-12);
}

#[test]
fn jacobian_matches_finite_differences() {
    let (p, c) = constants();
    let ja = jacobian_at_origin(&p, &c);
    let jn = numeric_jacobian(&p, &c, H3Variant::Raw, [0.0; 3], 1e-6);
    for r in 0..3 {
        for k in 0..3 {
            assert!((ja[r][k] - jn[r][k]).abs() < 1e-8, "{r},{k}: {} vs {}", ja[r][k], jn[r][k]);
        }
    }
}

#[test]
fn conjugated_jacobian_is_diagonal() {
    let (p, c) = constants();
    let d = conjugated_jacobian(&jacobian_at_origin(&p, &c), &c);
    let want = [[c.lambda1, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -c.lambda1]];
    for r in 0..3 {
        for k in 0..3 {
            assert!((d[r][k] - want[r][k]).abs() < 1e-8);
        }
    }
    assert!((d[0][0] - 7.348469).abs() < 1e-6);
}

#[test]
fn eigenvectors() {
    let (p, c) = constants();
    let res = eigen_residuals(&jacobian_at_origin(&p, &c), &c);
    assert!(res.iter().all(|r| *r < 1e-8), "{res:?}");
    // the unstable vector reused for the stable eigenvalue is not an eigenvector
    let j = jacobian_at_origin(&p, &c);
    let v = [c.upsilon, 0.0, 1.0];
    let jv: Vec<f64> = (0..3).map(|r| (0..3).map(|k| j[r][k] * v[k]).sum()).collect();
    assert!((jv[0] + c.lambda1 * v[0]).abs() > 1.0);
}

#[test]
fn first_column_of_change() {
    let (_, c) = constants();
    let y = diagonal_change(&c, Direction::FromDiagonal, [1.0, 0.0, 0.0]);
    assert!((y[0] - c.upsilon).abs() < 1e-15 && y[1] == 0.0 && y[2] == 1.0);
}

#[test]
fn diagonal_nonlinearity_is_quadratic() {
    let (p, c) = constants();
    let v = H3Variant::Regularized { epsilon: 0.5 };
    let dir = [0.3, -0.5, 0.7];
    let h1 = h_functions(&p, &c, v, dir.map(|x| 1e-3 * x));
    let h2 = h_functions(&p, &c, v, dir.map(|x| 5e-4 * x));
    for i in 0..3 {
        let ratio = h1[i] / h2[i];
        assert!((ratio - 4.0).abs() < 1e-2, "component {i}: {ratio}");
    }
    assert!((h1[1] + (0.5e-3f64).powi(2)).abs() < 1e-18);
}

#[test]
fn regularization_is_c1() {
    let (z, e) = (4.0 / 3.0, 0.5);
    let h = 1e-7;
    assert!((psi_eps(z, e, e + h) - psi_eps(z, e, e - h)).abs() < 1e-6);
    let dl = (psi_eps(z, e, e) - psi_eps(z, e, e - h)) / h;
    let dr = (psi_eps(z, e, e + h) - psi_eps(z, e, e)) / h;
    assert!((dl - dr).abs() < 1e-5);
    assert_eq!(psi_eps(z, e, 0.8), 0.8f64.powf(z));
}

#[test]
fn inadmissible_parameters_rejected() {
    for q in [2.5, 5.2] {
        let p = Params::new(3, 1.0, 1.0, q).unwrap();
        assert!(matches!(NdConstants::new(&p), Err(NdError::NotAdmissible { .. })));
    }
}

#[test]
fn radius_checklist_on_canonical_manifold() {
    let g = canonical_grid();
    assert!(g.radius.all_hold());
    assert!(g.c1 > 0.0 && g.r0 > 0.0 && g.r0 < 0.05);
}

#[test]
fn manifold_contracts() {
    let g = canonical_grid();
    assert!(g.final_delta < 1e-14, "{}", g.final_delta);
    assert!(g.max_ratio() <= 0.55, "{:?}", g.ratios);
    assert!(g.lipschitz_estimate <= g.c2);
    assert_eq!(g.eval(0.0, 0.0), 0.0);
    assert_eq!(g.node(0, (g.nz - 1) / 2), 0.0);
}

#[test]
fn manifold_is_tangent_to_center_stable_plane() {
    let g = canonical_grid();
    // |w| ≤ C r0² and w vanishes to second order at the origin
    assert!(g.max_abs() < 3.0 * g.c1 * g.r0 * g.r0);
    let (a, b) = (g.eval(g.node_y(2), 0.0).abs(), g.eval(g.node_y(4), 0.0).abs());
    assert!(b > 2.5 * a, "{a} {b}");
}

#[test]
fn solutions_have_the_right_asymptotics() {
    let g = canonical_grid();
    let s = nd_solution(g, g.r0, 0.5 * g.r0, &NdHorizon::default()).unwrap();
    assert!(s.center_flow_error < 1e-10);
    assert!(s.x2_error < 1e-10);
    assert!(s.flow_bounds_hold);
    assert!(s.limit_deviation.abs() < 1e-2, "{}", s.limit_deviation);
    assert!(s.min_one_minus_x1x2 > 0.0);
    let (lo, hi) = s.trajectory.r_range();
    assert!((hi / lo).log10() >= 3.0);
    for st in &s.trajectory.samples {
        let dev = st.coord.powf(2.0 / 3.0) * st.value - 1.0;
        assert!(dev.abs() < 1e-2);
    }
}

#[test]
fn x1x2_decreases_over_last_decade() {
    let g = canonical_grid();
    let s = nd_solution(g, g.r0, -0.3 * g.r0, &NdHorizon::default()).unwrap();
    let t_end = s.x_samples.last().unwrap().0;
    let tail: Vec<f64> =
        s.x_samples.iter().filter(|(t, _)| *t >= t_end / 10.0).map(|(_, x)| (x[0] * x[1]).abs()).collect();
    assert!(tail.len() > 10);
    assert!(tail.windows(2).all(|w| w[1] <= w[0]));
    assert!(tail.last().unwrap() < &(0.5 * tail[0]));
}

#[test]
fn reconstruction_solves_radial_equation() {
    let g = canonical_grid();
    let s = nd_solution(g, g.r0, 0.2 * g.r0, &NdHorizon::default()).unwrap();
    let p = s.trajectory.params;
    let smp = &s.trajectory.samples;
    for i in (5..smp.len() - 5).step_by(40) {
        let (a, m, b) = (smp[i - 1], smp[i], smp[i + 1]);
        // derivatives in log r, second order on the non-uniform stencil
        let (h1, h2) = (m.coord.ln() - a.coord.ln(), b.coord.ln() - m.coord.ln());
        let d = |fa: f64, fm: f64, fb: f64| {
            (fb - fm) * h1 / (h2 * (h1 + h2)) + (fm - fa) * h2 / (h1 * (h1 + h2))
        };
        let du = d(a.value, m.value, b.value) / m.coord;
        assert!((du - m.deriv).abs() < 1e-3 * m.deriv.abs(), "u' at {}", m.coord);
        let d2u = d(a.deriv, m.deriv, b.deriv) / m.coord;
        let (_, rhs) = rhs_eval(Chart::R, &p, State::new(m.coord, m.value, m.deriv)).unwrap();
        let scale = m.value.powf(p.q);
        assert!((d2u - rhs).abs() < 1e-3 * scale, "u'' at {}: {d2u} vs {rhs}", m.coord);
    }
}

#[test]
fn manifold_defect_is_at_interpolation_level() {
    let g = canonical_grid();
    let s = nd_solution(g, 0.5 * g.r0, 0.0, &NdHorizon::default()).unwrap();
    let hy = g.r0 / (g.ny - 1) as f64;
    assert!(s.manifold_defect < g.c1 * hy * hy, "{}", s.manifold_defect);
    assert!(s.manifold_defect < 1e-6);
}

#[test]
fn five_initial_points_give_five_solutions() {
    let g = canonical_grid();
    let sols: Vec<NdSolution> = [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .map(|f| nd_solution(g, g.r0, f * g.r0, &NdHorizon::default()).unwrap())
        .collect();
    for i in 0..5 {
        for j in i + 1..5 {
            assert!(sup_distance(&sols[i], &sols[j]) > 1e-6);
        }
    }
}

#[test]
fn initial_point_outside_domain_rejected() {
    let g = canonical_grid();
    let h = NdHorizon::default();
    assert!(matches!(nd_solution(g, 0.0, 0.0, &h), Err(NdError::Domain { .. })));
    assert!(matches!(nd_solution(g, g.r0, 2.0 * g.r0, &h), Err(NdError::Domain { .. })));
}

#[test]
fn oversized_radius_is_reported() {
    let cfg = NdConfig { r0: Some(0.5), ny: 5, nz: 9, max_iter: 5, ..NdConfig::default() };
    let out = manifold_fixed_point(&Params::canonical(), &cfg);
    assert!(out.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonal_change_round_trip(a in -1.0f64..1.0, b in -1.0f64..1.0, c3 in -1.0f64..1.0) {
        let (_, c) = constants();
        let v = [a, b, c3];
        let back = diagonal_change(&c, Direction::FromDiagonal, diagonal_change(&c, Direction::ToDiagonal, v));
        for i in 0..3 {
            prop_assert!((back[i] - v[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn center_coordinate_has_closed_form(z0 in -1.0f64..1.0, y0 in 0.1f64..1.0) {
        let g = canonical_grid();
        let s = nd_solution(g, y0 * g.r0, z0 * g.r0, &NdHorizon { decades: 3.0, samples_per_decade: 20, ..NdHorizon::default() }).unwrap();
        prop_assert!(s.center_flow_error < 1e-10);
        prop_assert!(s.flow_bounds_hold);
    }

    #[test]
    fn radius_inequalities_hold(c1 in 0.1f64..100.0, c2 in 0.1f64..10.0, a in 0.1f64..10.0, cabs in 0.1f64..10.0, delta in 0.01f64..1.0) {
        let rc = choose_radius(c1, c2, a, cabs, delta, a / 2.0).unwrap();
        prop_assert!(rc.all_hold());
    }
}
