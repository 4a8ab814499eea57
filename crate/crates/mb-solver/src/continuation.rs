use crate::bumps::{bump_analysis, BumpOptions};
use crate::MbError;
use params_core::{r_lambda, Params};
use pohozaev::fowler_energy_state;
use radial_integrator::{shoot_removable, Chart, Orientation, ShootOptions, Tolerance, Trajectory};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct MbConfig {
    /// A priori ceiling `Λ > Λ0` on `z`.
    pub lambda_cap: f64,
    /// Increasing values of `γ = u(0)`.
    pub schedule: Vec<f64>,
    /// Inner end of the candidate; `None` takes a tenth of the innermost bump radius.
    pub r_min: Option<f64>,
    pub tol: Tolerance,
    /// Dyadic intervals below `R_Λ` used for the Cauchy check.
    pub dyadic_levels: usize,
    pub bumps: BumpOptions,
}

impl MbConfig {
    pub fn new(lambda_cap: f64, schedule: Vec<f64>) -> Self {
        MbConfig {
            lambda_cap,
            schedule,
            r_min: None,
            tol: Tolerance { rtol: 1e-12, atol: 1e-14 },
            dyadic_levels: 8,
            bumps: BumpOptions::default(),
        }
    }
}

/// `start, start·ratio, …` up to `end` inclusive (with relative slack `1e-9`).
pub fn geometric_schedule(start: f64, ratio: f64, end: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut g = start;
    while g <= end * (1.0 + 1e-9) {
        v.push(g);
        g *= ratio;
    }
    v
}

#[derive(Debug, Clone)]
pub struct Member {
    pub gamma: f64,
    pub trajectory: Trajectory,
    pub z_max: f64,
    /// Largest increase of the Fowler energy between consecutive samples.
    pub energy_max_increase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyReport {
    /// `[2^{-k-1}R_Λ, 2^{-k}R_Λ]`.
    pub intervals: Vec<(f64, f64)>,
    /// For each interval, `sup |z_{i+1} - z_i|` over successive members.
    pub differences: Vec<Vec<f64>>,
    /// Whether the differences on each interval shrink.
    pub cauchy_trend: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct ContinuationRun {
    pub params: Params,
    pub lambda_cap: f64,
    pub r_lambda: f64,
    pub members: Vec<Member>,
    pub bound_ok: bool,
    pub cauchy: CauchyReport,
    /// No compact-subset convergence seen along the schedule.
    pub inconclusive: bool,
    /// Last member on `[r_min, R_Λ]`.
    pub candidate: Trajectory,
    pub candidate_gamma: f64,
    pub r_min: f64,
    /// Smallest radius down to which the last member is stable under a tenfold
    /// tolerance reduction.
    pub resolved_radius: f64,
}

/// Smallest `r` such that on `[r, r_hi]` the solutions at `tol` and `tol/10`
/// agree in `z` to relative `1e-3`.
pub fn resolved_radius(p: &Params, gamma: f64, r_hi: f64, tol: Tolerance) -> Result<f64, MbError> {
    let shoot = |t: Tolerance| shoot_removable(p, gamma, r_hi, &ShootOptions { tol: t, ..ShootOptions::default() });
    let a = shoot(tol)?;
    let b = shoot(Tolerance { rtol: tol.rtol / 10.0, atol: tol.atol / 10.0 })?;
    let pts = a.log_grid(200);
    let mut res = pts.last().map(|q| q.r).unwrap_or(r_hi);
    for q in pts.iter().rev() {
        let Some(qb) = b.point_at(q.r) else { break };
        if (q.z - qb.z).abs() > 1e-3 * q.z.abs() {
            break;
        }
        res = q.r;
    }
    Ok(res)
}

fn energy_max_increase(traj: &Trajectory) -> f64 {
    let log = traj.to_chart(Chart::Log(Orientation::LogR));
    let p = traj.params;
    let mut e: Vec<(f64, f64)> = log.samples.iter().map(|s| (s.coord, fowler_energy_state(&p, *s))).collect();
    e.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    e.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max)
}

/// `sup |z_{i+1} - z_i|` over `[lo, hi]` for successive members.
pub fn successive_differences(members: &[Member], lo: f64, hi: f64) -> Vec<f64> {
    let grid: Vec<f64> = (0..=64).map(|j| lo * (hi / lo).powf(j as f64 / 64.0)).collect();
    members
        .windows(2)
        .map(|w| {
            grid.iter()
                .filter_map(|&r| Some((w[1].trajectory.point_at(r)?.z - w[0].trajectory.point_at(r)?.z).abs()))
                .fold(0.0, f64::max)
        })
        .collect()
}

fn cauchy_report(members: &[Member], r_lambda: f64, levels: usize) -> CauchyReport {
    let mut intervals = Vec::new();
    let mut differences = Vec::new();
    let mut cauchy_trend = Vec::new();
    for k in 0..levels {
        let hi = r_lambda * 0.5f64.powi(k as i32);
        let lo = hi / 2.0;
        let diffs = successive_differences(members, lo, hi);
        let n = diffs.len();
        let trend = n >= 3 && diffs[n - 3..].windows(2).all(|w| w[1] <= w[0]) && diffs[n - 1] < 0.5 * diffs.iter().cloned().fold(0.0, f64::max);
        intervals.push((lo, hi));
        differences.push(diffs);
        cauchy_trend.push(trend);
    }
    CauchyReport { intervals, differences, cauchy_trend }
}

/// Shoots the removable solution for every `γ` of the schedule on `(0, R_Λ]`,
/// checks `z ≤ Λ`, and takes the last member as the multi-bump candidate.
pub fn mb_continuation(p: &Params, cfg: &MbConfig) -> Result<ContinuationRun, MbError> {
    if !p.mb_admissible() {
        return Err(MbError::NotAdmissible { q: p.q });
    }
    let rl = r_lambda(p, cfg.lambda_cap)?;
    if cfg.schedule.len() < 2 || cfg.schedule.windows(2).any(|w| !(w[1] > w[0])) || !(cfg.schedule[0] > 0.0) {
        return Err(MbError::Config("schedule must be positive and strictly increasing with at least two values".into()));
    }
    let opts = ShootOptions { tol: cfg.tol, ..ShootOptions::default() };
    let members: Vec<Member> = cfg
        .schedule
        .par_iter()
        .map(|&gamma| {
            let trajectory = shoot_removable(p, gamma, rl, &opts)?;
            let pts = trajectory.radial_points();
            let worst = pts.iter().max_by(|a, b| a.z.partial_cmp(&b.z).unwrap()).unwrap();
            if worst.z > cfg.lambda_cap * (1.0 + 1e-9) {
                return Err(MbError::BoundViolation { gamma, r: worst.r, z: worst.z, lambda: cfg.lambda_cap });
            }
            let energy_max_increase = energy_max_increase(&trajectory);
            Ok(Member { gamma, z_max: worst.z, trajectory, energy_max_increase })
        })
        .collect::<Result<_, _>>()?;
    let cauchy = cauchy_report(&members, rl, cfg.dyadic_levels);
    let inconclusive = !cauchy.cauchy_trend.iter().all(|t| *t);
    let last = members.last().unwrap();
    let r_min = match cfg.r_min {
        Some(r) => r,
        None => {
            let rep = bump_analysis(&last.trajectory, &cfg.bumps);
            match rep.bumps.last() {
                Some(b) => b.r / 10.0,
                None => last.trajectory.r_range().0,
            }
        }
    };
    if !(r_min > 0.0 && r_min < rl) {
        return Err(MbError::Config(format!("r_min = {r_min} outside (0, R_Lambda = {rl})")));
    }
    let resolved = resolved_radius(p, last.gamma, rl, cfg.tol)?;
    let candidate = last.trajectory.restrict(r_min.max(resolved), rl);
    Ok(ContinuationRun {
        params: *p,
        lambda_cap: cfg.lambda_cap,
        r_lambda: rl,
        bound_ok: true,
        candidate,
        candidate_gamma: last.gamma,
        r_min,
        resolved_radius: resolved,
        cauchy,
        inconclusive,
        members,
    })
}
