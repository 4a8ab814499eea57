use classifier::corpus::{adversarial_corpus, Forbidden};
use classifier::*;
use mb_solver::{geometric_schedule, mb_continuation, MbConfig};
use nd_solver::{manifold_fixed_point, nd_solution, NdConfig, NdHorizon};
use orbit_family::OrbitData;
use params_core::{bubble_deriv, bubble_eval, Params};
use proptest::prelude::*;
use radial_integrator::{shoot_removable, Chart, Orientation, ShootOptions, State, Trajectory};

fn bubble(p: &Params, lo: f64, hi: f64) -> Trajectory {
    let n = 1000;
    let samples = (0..=n)
        .map(|i| {
            let r = lo * (hi / lo).powf(i as f64 / n as f64);
            State::new(r, bubble_eval(p, 1.0, r), bubble_deriv(p, 1.0, r))
        })
        .collect();
    Trajectory::new(Chart::R, *p, samples, Vec::new(), "bubble")
}

fn orbit_trajectory(p: &Params, sigma: f64, t_end: f64) -> Trajectory {
    let o = OrbitData::build(p, sigma).unwrap();
    let n = (t_end * 50.0) as usize;
    let samples = (0..=n)
        .map(|i| {
            let t = t_end * i as f64 / n as f64;
            let (phi, dphi) = o.eval(t, 0.0);
            State::new(t, phi, dphi)
        })
        .collect();
    Trajectory::new(Chart::Log(Orientation::LogInvR), *p, samples, Vec::new(), "orbit")
}

#[test]
fn bubble_is_removable() {
    let p = Params::new(3, 1.0, 0.0, 4.5).unwrap();
    let c = classify(&bubble(&p, 1e-8, 1e2), &p, &Thresholds::default());
    assert_eq!(c.label, Label::Removable, "{:?}", c.evidence);
}

#[test]
fn removable_shot_is_removable() {
    let p = Params::canonical();
    let t = shoot_removable(&p, 1.0, 0.2, &ShootOptions::default()).unwrap();
    assert_eq!(classify(&t, &p, &Thresholds::default()).label, Label::Removable);
}

#[test]
fn periodic_orbit_is_cgs() {
    let p = Params::canonical();
    let c = classify(&orbit_trajectory(&p, 0.02, 20.0), &p, &Thresholds::default());
    assert_eq!(c.label, Label::Cgs, "{:?}", c.evidence);
    assert!((c.evidence.sigma_estimate - 0.02).abs() < 1e-3);
    assert!(c.evidence.p_limit.unwrap() > 0.0);
}

#[test]
fn nd_solution_is_nd() {
    let p = Params::canonical();
    let g = manifold_fixed_point(&p, &NdConfig::default()).unwrap();
    let s = nd_solution(&g, g.r0, 0.0, &NdHorizon::default()).unwrap();
    let c = classify(&s.trajectory, &p, &Thresholds::default());
    assert_eq!(c.label, Label::Nd, "{:?}", c.evidence);
    assert!(c.evidence.nd_limit_deviation.unwrap() < 1e-2);
}

#[test]
fn multi_bump_candidate_is_mb() {
    let p = Params::canonical();
    let run = mb_continuation(&p, &MbConfig::new(1.0, geometric_schedule(10.0, 10.0, 1e16))).unwrap();
    let c = classify(&run.candidate, &p, &Thresholds::default());
    assert_eq!(c.label, Label::Mb, "{:?}", c.evidence);
    assert!(c.evidence.bump_count >= 2);
}

#[test]
fn short_trajectory_is_unknown() {
    let p = Params::new(3, 1.0, 0.0, 4.5).unwrap();
    let c = classify(&bubble(&p, 1e-2, 1.0), &p, &Thresholds::default());
    assert_eq!(c.label, Label::Unknown);
    assert!(!c.evidence.coverage_ok);
}

#[test]
fn adversarial_corpus_respects_ranges() {
    let corpus = adversarial_corpus(7);
    assert_eq!(corpus.len(), 50);
    for (i, case) in corpus.iter().enumerate() {
        let p = case.params;
        let c = classify(&case.trajectory, &p, &Thresholds::default());
        match case.forbidden {
            Forbidden::Nd => assert!(p.q <= p.two_star_s() - 1.0 + 1e-12),
            Forbidden::Mb => assert!(p.q <= p.two_star() - 2.0 + 1e-12),
        }
        if p.q <= p.two_star_s() - 1.0 {
            assert_ne!(c.label, Label::Nd, "case {i}: {:?}", c.evidence);
        }
        if p.q <= p.two_star() - 2.0 {
            assert_ne!(c.label, Label::Mb, "case {i}: {:?}", c.evidence);
        }
    }
}

#[test]
fn same_shapes_pass_when_admissible() {
    // the MB-shaped corpus entries are labelled MB once q is moved into range
    let mut hits = 0;
    for case in adversarial_corpus(7).iter().filter(|c| c.forbidden == Forbidden::Mb) {
        let mut p = case.params;
        p.q = 0.5 * (p.two_star() - 2.0) + 0.5 * (p.two_star() - 1.0);
        let t = Trajectory::new(Chart::R, p, case.trajectory.samples.clone(), Vec::new(), "moved");
        if classify(&t, &p, &Thresholds::default()).label == Label::Mb {
            hits += 1;
        }
    }
    assert!(hits > 0);
}

#[test]
fn refinement_keeps_label() {
    let p = Params::new(3, 1.0, 0.0, 4.5).unwrap();
    let a = classify(&bubble(&p, 1e-7, 1e2), &p, &Thresholds::default()).label;
    let b = classify(&bubble(&p, 1e-8, 1e2), &p, &Thresholds::default()).label;
    assert_eq!(a, b);
    let p = Params::canonical();
    let a = classify(&orbit_trajectory(&p, 0.02, 20.0), &p, &Thresholds::default()).label;
    let b = classify(&orbit_trajectory(&p, 0.02, 22.3), &p, &Thresholds::default()).label;
    assert_eq!(a, b);
}

#[test]
fn label_names() {
    let names: Vec<&str> = [Label::Removable, Label::Nd, Label::Cgs, Label::Mb, Label::Unknown].iter().map(|l| l.name()).collect();
    assert_eq!(names, ["Removable", "ND", "CGS", "MB", "Unknown"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn guards_hold_for_any_seed(seed in 0u64..10_000) {
        for case in adversarial_corpus(seed).iter().step_by(5) {
            let p = case.params;
            let l = classify(&case.trajectory, &p, &Thresholds::default()).label;
            prop_assert!(!(l == Label::Nd && p.q <= p.two_star_s() - 1.0));
            prop_assert!(!(l == Label::Mb && p.q <= p.two_star() - 2.0));
        }
    }

    #[test]
    fn orbit_sigma_recovered(sigma in 0.005f64..0.03) {
        let p = Params::canonical();
        let c = classify(&orbit_trajectory(&p, sigma, 20.0), &p, &Thresholds::default());
        prop_assert_eq!(c.label, Label::Cgs);
        prop_assert!((c.evidence.sigma_estimate - sigma).abs() < 1e-3);
    }
}
