//! Pohozaev-type quantities for radial solutions.
//!
//! With `z = r^{(n-2)/2}u`,
//!
//! ```text
//! P_r = (ω_{n-1}/2) [ z² F_r(z) - (r z')² ]
//! P_{r2} - P_{r1} = ω_{n-1} c_{μ,q,n} ∫_{r1}^{r2} ξ^{n-1} u^{q+1} dξ
//! ```

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

use params_core::{sphere_area, Params, F0};
use radial_integrator::{convert, Chart, Orientation, State, Trajectory};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PohozaevError {
    #[error("radius {0} outside the trajectory")]
    OutOfRange(f64),
    #[error("trajectory must use the t = log r chart")]
    WrongOrientation,
    #[error("invalid interval [{0}, {1}]")]
    Interval(f64, f64),
}

/// `z² F_r(z) = F0(z) + 2μ r^λ z^{q+1}/(q+1)`.
fn z2_fr(p: &Params, r: f64, z: f64) -> f64 {
    F0(p, z) + 2.0 * p.mu * r.powf(p.lambda()) * z.powf(p.q + 1.0) / (p.q + 1.0)
}

/// `P_r` from the boundary formula.
pub fn pohozaev_radial(traj: &Trajectory, r: f64) -> Result<f64, PohozaevError> {
    let p = traj.params;
    let pt = traj.point_at(r).ok_or(PohozaevError::OutOfRange(r))?;
    Ok(pohozaev_from_z(&p, r, pt.z, pt.rdz))
}

/// `P_r` from `z` and `r z'` at radius `r`.
pub fn pohozaev_from_z(p: &Params, r: f64, z: f64, rdz: f64) -> f64 {
    sphere_area(p.n) / 2.0 * (z2_fr(p, r, z) - rdz * rdz)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    pub spread: f64,
    /// Smallest radius used.
    pub r_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PohozaevLimit {
    Estimate(LimitEstimate),
    /// Fewer than three decades of radius available.
    Inconclusive { decades: f64 },
}

impl PohozaevLimit {
    pub fn value(&self) -> Option<f64> {
        match self {
            PohozaevLimit::Estimate(e) => Some(e.value),
            PohozaevLimit::Inconclusive { .. } => None,
        }
    }
}

/// Aitken extrapolation of `P` at `r, r/2, r/4`, with a fall-back to the
/// innermost value when the triple is not geometrically convergent.
fn aitken(a: f64, b: f64, c: f64) -> f64 {
    let den = a + c - 2.0 * b;
    let d1 = b - a;
    let d2 = c - b;
    if den == 0.0 || d1 == 0.0 || !(d2 / d1 > 0.0 && d2 / d1 < 0.95) {
        return c;
    }
    let v = c - d2 * d2 / (d2 - d1);
    if v.is_finite() {
        v
    } else {
        c
    }
}

/// `lim_{r→0} P_r` by repeated three-point extrapolation over the innermost decade.
pub fn pohozaev_limit(traj: &Trajectory) -> PohozaevLimit {
    let (lo, hi) = traj.r_range();
    let decades = (hi / lo).log10();
    if !(decades >= 3.0) {
        return PohozaevLimit::Inconclusive { decades };
    }
    let mut est = Vec::new();
    let mut r = lo * 4.0;
    while r <= lo * 40.0 && r <= hi {
        let vals: Option<Vec<f64>> = [r, r / 2.0, r / 4.0].iter().map(|&x| pohozaev_radial(traj, x).ok()).collect();
        if let Some(v) = vals {
            est.push(aitken(v[0], v[1], v[2]));
        }
        r *= 10f64.powf(0.1);
    }
    if est.is_empty() {
        return PohozaevLimit::Inconclusive { decades };
    }
    let value = est[0];
    let spread = est.iter().map(|e| (e - value).abs()).fold(0.0, f64::max);
    PohozaevLimit::Estimate(LimitEstimate { value, spread, r_min: lo })
}

/// Gauss–Legendre nodes and weights on [-1, 1], 8 points.
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// `∫_{r1}^{r2} ξ^{n-1} u^{q+1} dξ`, Gauss–Legendre on each dense-output step.
pub fn increment_integral(traj: &Trajectory, r1: f64, r2: f64) -> Result<f64, PohozaevError> {
    if !(r1 > 0.0 && r2 > r1) {
        return Err(PohozaevError::Interval(r1, r2));
    }
    let p = traj.params;
    let (lo, hi) = traj.r_range();
    if r1 < lo * (1.0 - 1e-12) || r2 > hi * (1.0 + 1e-12) {
        return Err(PohozaevError::OutOfRange(if r1 < lo { r1 } else { r2 }));
    }
    let nodes = match traj.dense_breakpoints_r(r1, r2) {
        Some(v) => v,
        None => {
            let mut v: Vec<f64> = traj.radial_points().iter().map(|x| x.r).filter(|r| *r > r1 && *r < r2).collect();
            v.push(r1);
            v.push(r2);
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        }
    };
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        // integrate in log r: dξ = ξ d(log ξ)
        let (la, lb) = (a.ln(), b.ln());
        let (mid, half) = (0.5 * (la + lb), 0.5 * (lb - la));
        let mut acc = 0.0;
        for (x, wt) in GL8 {
            let r = (mid + half * x).exp().clamp(a, b);
            let st = traj.eval_r(r).ok_or(PohozaevError::OutOfRange(r))?;
            let u = convert(traj.chart, Chart::R, &p, st).value.max(0.0);
            acc += wt * r.powf(p.nf()) * u.powf(p.q + 1.0);
        }
        total += half * acc;
    }
    Ok(total)
}

/// `|P_{r2} - P_{r1} - ω c ∫ ξ^{n-1}u^{q+1}|`.
pub fn pohozaev_increment_residual(traj: &Trajectory, r1: f64, r2: f64) -> Result<f64, PohozaevError> {
    let p = traj.params;
    let lhs = pohozaev_radial(traj, r2)? - pohozaev_radial(traj, r1)?;
    let rhs = sphere_area(p.n) * p.c_mu() * increment_integral(traj, r1, r2)?;
    Ok((lhs - rhs).abs())
}

/// Fowler energy `E(t) = w'² - w² F_{e^t}(w)` on a `t = log r` trajectory.
pub fn fowler_energy(traj: &Trajectory, t: f64) -> Result<f64, PohozaevError> {
    if traj.chart != Chart::Log(Orientation::LogR) {
        return Err(PohozaevError::WrongOrientation);
    }
    let st = traj.eval(t).ok_or(PohozaevError::OutOfRange(t.exp()))?;
    Ok(fowler_energy_state(&traj.params, st))
}

/// Fowler energy of a single `t = log r` state.
pub fn fowler_energy_state(p: &Params, st: State) -> f64 {
    st.deriv * st.deriv - z2_fr(p, st.coord.exp(), st.value)
}

/// Orbit energy `σ = F0(φ) - φ'²`, with a flag for the trivial point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSigma {
    pub sigma: f64,
    pub is_orbit: bool,
}

pub fn orbit_sigma(p: &Params, phi: f64, dphi: f64) -> OrbitSigma {
    if !(phi > 0.0) {
        return OrbitSigma { sigma: 0.0, is_orbit: false };
    }
    OrbitSigma { sigma: F0(p, phi) - dphi * dphi, is_orbit: true }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PohozaevReport {
    pub r_values: Vec<f64>,
    pub p_r: Vec<f64>,
    pub limit: PohozaevLimit,
    /// Residual of the increment law between consecutive radii.
    pub increment_residuals: Vec<f64>,
}

/// `P_r` on a log-spaced radius grid with the limit and increment checks.
pub fn pohozaev_report(traj: &Trajectory, per_decade: usize) -> Result<PohozaevReport, PohozaevError> {
    let (lo, hi) = traj.r_range();
    let n = ((hi / lo).log10() * per_decade as f64).ceil().max(1.0) as usize;
    let r_values: Vec<f64> = (0..=n).map(|i| (lo * (hi / lo).powf(i as f64 / n as f64)).clamp(lo, hi)).collect();
    let p_r = r_values.iter().map(|&r| pohozaev_radial(traj, r)).collect::<Result<Vec<_>, _>>()?;
    let increment_residuals = r_values
        .windows(2)
        .map(|w| pohozaev_increment_residual(traj, w[0], w[1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PohozaevReport { r_values, p_r, limit: pohozaev_limit(traj), increment_residuals })
}
