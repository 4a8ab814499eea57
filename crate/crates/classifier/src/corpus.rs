//! Synthetic trajectories whose shape mimics an ND or MB profile while the
//! exponent `q` lies where that profile cannot occur.

use params_core::{bubble_deriv, bubble_eval, Params};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_integrator::{Chart, State, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forbidden {
    /// `q ≤ 2*(s) - 1`.
    Nd,
    /// `q ≤ 2* - 2`.
    Mb,
}

#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub params: Params,
    pub forbidden: Forbidden,
    pub trajectory: Trajectory,
}

fn sampled(p: &Params, lo: f64, hi: f64, per_decade: usize, f: impl Fn(f64) -> (f64, f64), tag: &str) -> Trajectory {
    let n = ((hi / lo).log10() * per_decade as f64).ceil() as usize;
    let samples = (0..=n)
        .map(|i| {
            let r = lo * (hi / lo).powf(i as f64 / n as f64);
            let (u, du) = f(r);
            State::new(r, u, du)
        })
        .collect();
    Trajectory::new(Chart::R, *p, samples, Vec::new(), tag)
}

/// `r^a u ≡ A` with `q` in the ND-forbidden range.
fn power_law(rng: &mut ChaCha8Rng, at_boundary: bool) -> CorpusCase {
    let n = rng.gen_range(3..=7u32);
    let s = rng.gen_range(0.1..1.9);
    let mu = rng.gen_range(0.1..2.0);
    let probe = Params::new(n, s, mu, 2.0).unwrap();
    let top = probe.two_star_s() - 1.0;
    let q = if at_boundary { top } else { rng.gen_range(1.0 + 1e-3..top) };
    let p = Params::new(n, s, mu, q).unwrap();
    let a = rng.gen_range(0.05..(p.nf() - 2.0) - 0.05);
    let amp = if rng.gen_bool(0.5) { mu.powf(-1.0 / (q - top + 1e-3).abs().max(0.1)) } else { rng.gen_range(0.1..10.0) };
    let traj = sampled(&p, 1e-8, 1.0, 50, |r| (amp * r.powf(-a), -a * amp * r.powf(-a - 1.0)), "power-law");
    CorpusCase { params: p, forbidden: Forbidden::Nd, trajectory: traj }
}

/// Sum of three or four bubbles with centres many decades apart and `q` in the
/// MB-forbidden range (or the ND-forbidden range when `nd`).
fn bubble_sum(rng: &mut ChaCha8Rng, nd: bool, at_boundary: bool) -> CorpusCase {
    let n = if nd { rng.gen_range(3..=7u32) } else { rng.gen_range(3..=5u32) };
    let s = rng.gen_range(0.1..1.9);
    let mu = rng.gen_range(0.1..2.0);
    let probe = Params::new(n, s, mu, 2.0).unwrap();
    let top = if nd { probe.two_star_s() - 1.0 } else { probe.two_star() - 2.0 };
    let q = if at_boundary { top } else { rng.gen_range(1.0 + 1e-3..top.max(1.0 + 2e-3)) };
    let p = Params::new(n, s, mu, q).unwrap();
    let count = rng.gen_range(3..=4usize);
    let first = rng.gen_range(-2.5..-1.0f64);
    // gaps wide enough that z nearly vanishes between bumps
    let gap = 14.0 / (n as f64 - 2.0).sqrt();
    let etas: Vec<f64> = (0..count).map(|k| 10f64.powf(first - gap * k as f64)).collect();
    let lo = etas[count - 1] / 10.0;
    let traj = sampled(
        &p,
        lo,
        1.0,
        40,
        |r| etas.iter().fold((0.0, 0.0), |acc, &e| (acc.0 + bubble_eval(&p, e, r), acc.1 + bubble_deriv(&p, e, r))),
        "bubble-sum",
    );
    CorpusCase { params: p, forbidden: if nd { Forbidden::Nd } else { Forbidden::Mb }, trajectory: traj }
}

/// Fifty cases from a fixed seed: power laws and bubble sums, a few of them
/// with `q` exactly on the boundary of the forbidden range.
pub fn adversarial_corpus(seed: u64) -> Vec<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(50);
    for i in 0..20 {
        out.push(power_law(&mut rng, i % 7 == 0));
    }
    for i in 0..20 {
        out.push(bubble_sum(&mut rng, false, i % 7 == 0));
    }
    for i in 0..10 {
        out.push(bubble_sum(&mut rng, true, i % 5 == 0));
    }
    out
}
