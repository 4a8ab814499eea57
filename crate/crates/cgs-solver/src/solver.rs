use crate::path::{power_remainder, tail_integrals, weighted_dist, WeightedPath};
use crate::picard::{picard_iterate, PicardError};
use crate::CgsError;
use orbit_family::{limiting_period, m0, sigma_bar, OrbitData, OrbitSpec, SIGMA_BAR_MARGIN};
use params_core::{f, f_prime, Params};
use radial_integrator::ode::{solve, OdeOptions, Tolerance};
use radial_integrator::{Chart, Orientation, State, Trajectory};
use std::f64::consts::PI;

/// Which contraction formulation is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Coordinates along `(∂tφ, ∂σφ)`; needs σ away from `σ̄`.
    AwayFromMax,
    /// Rotating frame of the linearisation at `M0`.
    NearMax,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::AwayFromMax => "away_from_max",
            Regime::NearMax => "near_max",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgsOptions {
    /// Grid spacing in `t`.
    pub h: f64,
    /// Picard stopping tolerance in the weighted norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Escalate `T0` until every measured ratio is below this.
    pub ratio_target: f64,
    /// Starting `T0`; `None` derives it from the orbit bounds.
    pub t0: Option<f64>,
    pub max_t0_doublings: usize,
    /// Relative width of the near-`σ̄` band.
    pub sigma_margin: f64,
    /// Minimum length of `[T0, T_max]` before the tail criterion applies.
    pub span: f64,
    /// Also solve on the doubled grid and report the difference.
    pub grid_check: bool,
}

impl Default for CgsOptions {
    fn default() -> Self {
        CgsOptions {
            h: 0.01,
            tol: 1e-10,
            max_iter: 200,
            ratio_target: 0.5,
            t0: None,
            max_t0_doublings: 6,
            sigma_margin: SIGMA_BAR_MARGIN,
            span: 60.0,
            grid_check: true,
        }
    }
}

impl CgsOptions {
    /// Rejects grids too coarse to resolve one orbit period.
    pub fn validate(&self, p: &Params) -> Result<(), CgsError> {
        let h_max = limiting_period(p) / 64.0;
        if !(self.h > 0.0 && self.h <= h_max) {
            return Err(CgsError::Options(format!("h = {} must lie in (0, {h_max:.4}]", self.h)));
        }
        if !(self.tol > 0.0 && self.span > 0.0) {
            return Err(CgsError::Options(format!("tol = {} and span = {} must be positive", self.tol, self.span)));
        }
        Ok(())
    }
}

/// Result of one converged fixed-point solve.
#[derive(Debug, Clone)]
pub struct CgsFixedPoint {
    pub regime: Regime,
    pub sigma: f64,
    pub tau_angle: f64,
    /// Unknowns of the contraction: `(V̂, Ŵ)` or the rotated `X̃`.
    pub path: WeightedPath,
    pub t0: f64,
    pub t_max: f64,
    pub t0_attempts: Vec<f64>,
    pub ratio_history: Vec<f64>,
    pub deltas: Vec<f64>,
    pub iterations: usize,
    /// Weighted bound on the neglected `[T_max, ∞)` part of the integrals.
    pub tail_bound: f64,
    /// Sup difference of `V` against the solve on the doubled grid.
    pub grid_halving_delta: Option<f64>,
    /// `max |f(φ)∂σφ - φ'∂σφ' - 1/2|`; away-from-max regime only.
    pub determinant_residual: Option<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
}

impl CgsFixedPoint {
    pub fn times(&self) -> Vec<f64> {
        self.path.times()
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratio_history.iter().copied().fold(0.0, f64::max)
    }

    /// `sup e^{λt/2}|V - φ|` over nodes in `[t_from, t_to]`.
    pub fn decay_certificate(&self, p: &Params, t_from: f64, t_to: f64) -> f64 {
        let rate = p.lambda() / 2.0;
        self.times()
            .iter()
            .enumerate()
            .filter(|(_, &t)| t >= t_from - 1e-12 && t <= t_to + 1e-12)
            .map(|(i, &t)| (rate * t).exp() * (self.v[i] - self.phi[i]).abs())
            .fold(0.0, f64::max)
    }

    /// `V` and `W` at an arbitrary time inside the grid.
    pub fn eval(&self, t: f64) -> Option<(f64, f64)> {
        let h = self.path.h;
        let x = (t - self.t0) / h;
        if x < -1e-9 || x > (self.v.len() - 1) as f64 + 1e-9 {
            return None;
        }
        let i = (x.floor().max(0.0) as usize).min(self.v.len() - 2);
        let th = (x - i as f64).clamp(0.0, 1.0);
        let (a, b) = (self.v[i], self.v[i + 1]);
        let (da, db) = (self.w[i], self.w[i + 1]);
        let h00 = 2.0 * th.powi(3) - 3.0 * th * th + 1.0;
        let h10 = th.powi(3) - 2.0 * th * th + th;
        let h01 = -2.0 * th.powi(3) + 3.0 * th * th;
        let h11 = th.powi(3) - th * th;
        let v = h00 * a + h10 * h * da + h01 * b + h11 * h * db;
        let w = ((6.0 * th * th - 6.0 * th) * a + (-6.0 * th * th + 6.0 * th) * b) / h
            + (3.0 * th * th - 4.0 * th + 1.0) * da
            + (3.0 * th * th - 2.0 * th) * db;
        Some((v, w))
    }
}

/// Orbit quantities on the grid.
struct Nodes {
    t: Vec<f64>,
    phi: Vec<f64>,
    dphi: Vec<f64>,
    psi: Vec<f64>,
    dpsi: Vec<f64>,
}

struct Setup<'a> {
    p: &'a Params,
    regime: Regime,
    orbit: Option<OrbitData>,
    tau: f64,
    omega: f64,
}

impl Setup<'_> {
    fn nodes(&self, t0: f64, h: f64, n: usize) -> Result<Nodes, CgsError> {
        let mut nd = Nodes {
            t: Vec::with_capacity(n),
            phi: Vec::with_capacity(n),
            dphi: Vec::with_capacity(n),
            psi: Vec::with_capacity(n),
            dpsi: Vec::with_capacity(n),
        };
        for i in 0..n {
            let t = t0 + i as f64 * h;
            let (ph, dph) = match &self.orbit {
                Some(o) => o.eval(t, self.tau),
                None => (m0(self.p), 0.0),
            };
            let (ps, dps) = match (self.regime, &self.orbit) {
                (Regime::AwayFromMax, Some(o)) => o.sigma_derivative(t, self.tau)?,
                _ => (0.0, 0.0),
            };
            nd.t.push(t);
            nd.phi.push(ph);
            nd.dphi.push(dph);
            nd.psi.push(ps);
            nd.dpsi.push(dps);
        }
        Ok(nd)
    }

    /// Bound on `|φ'| + |∂σφ|` (or the rotation norm) at time `t`.
    fn frame_bound(&self, t: f64) -> f64 {
        match (self.regime, &self.orbit) {
            (Regime::AwayFromMax, Some(o)) => {
                let per = o.period();
                let dp = o.period_derivative.unwrap_or(0.0).abs();
                let mut c0: f64 = 0.0;
                let mut vmax: f64 = 0.0;
                for k in 0..200 {
                    let y = o.eval_unshifted(per * k as f64 / 200.0);
                    c0 = c0.max(y[1].abs() + y[2].abs());
                    vmax = vmax.max(y[1].abs());
                }
                c0 + (t / per + 2.0) * dp * vmax
            }
            _ => rotation_bound(self.omega),
        }
    }

    fn upper_orbit(&self) -> f64 {
        match &self.orbit {
            Some(o) => o.b_sigma,
            None => m0(self.p),
        }
    }

    fn lower_orbit(&self) -> f64 {
        match &self.orbit {
            Some(o) => o.a_sigma,
            None => m0(self.p),
        }
    }

    /// Perturbation `(V - φ, W - φ')` from the unknowns at node `i`.
    fn perturbation(&self, nd: &Nodes, i: usize, x: [f64; 2]) -> (f64, f64) {
        match self.regime {
            Regime::AwayFromMax => {
                let fp = f(self.p, nd.phi[i]);
                (nd.dphi[i] * x[0] + nd.psi[i] * x[1], fp * x[0] + nd.dpsi[i] * x[1])
            }
            Regime::NearMax => {
                let (s, c) = (self.omega * nd.t[i]).sin_cos();
                (c * x[0] + s / self.omega * x[1], -self.omega * s * x[0] + c * x[1])
            }
        }
    }

    /// Nonlinear source and the weights multiplying it in each component.
    fn source(&self, nd: &Nodes, i: usize, x: [f64; 2]) -> Result<(f64, [f64; 2]), CgsError> {
        let p = self.p;
        let (dv, _) = self.perturbation(nd, i, x);
        let phi = nd.phi[i];
        let v = phi + dv;
        if !(v > 0.0) || !v.is_finite() {
            return Err(CgsError::Positivity { t: nd.t[i], value: v });
        }
        let m = p.two_star_s() - 1.0;
        let forcing = p.mu * (-p.lambda() * nd.t[i]).exp() * v.powf(p.q);
        let quad = -power_remainder(m, phi, dv);
        match self.regime {
            Regime::AwayFromMax => {
                let g = quad + forcing;
                Ok((g, [2.0 * nd.psi[i], -2.0 * nd.dphi[i]]))
            }
            Regime::NearMax => {
                let lin = (f_prime(p, phi) - f_prime(p, m0(p))) * dv;
                let n = quad + lin + forcing;
                let (s, c) = (self.omega * nd.t[i]).sin_cos();
                Ok((n, [-s / self.omega, c]))
            }
        }
    }

    /// One application of the contraction operator.
    fn apply(&self, nd: &Nodes, h: f64, x: &[[f64; 2]]) -> Result<(Vec<[f64; 2]>, Vec<[f64; 2]>), CgsError> {
        let n = x.len();
        let mut i1 = vec![0.0; n];
        let mut i2 = vec![0.0; n];
        for i in 0..n {
            let (g, wts) = self.source(nd, i, x[i])?;
            i1[i] = g * wts[0];
            i2[i] = g * wts[1];
        }
        let t1 = tail_integrals(&i1, h);
        let t2 = tail_integrals(&i2, h);
        let vals = (0..n).map(|i| [-t1[i], -t2[i]]).collect();
        let ders = (0..n).map(|i| [i1[i], i2[i]]).collect();
        Ok((vals, ders))
    }
}

/// Operator norm bound of `e^{tA}` in the sum norm, uniform in `t`.
fn rotation_bound(omega: f64) -> f64 {
    1.0 + omega.max(1.0 / omega)
}

struct Solved {
    x: Vec<[f64; 2]>,
    dx: Vec<[f64; 2]>,
    ratios: Vec<f64>,
    deltas: Vec<f64>,
    iterations: usize,
    nodes: Nodes,
}

fn solve_on_grid(setup: &Setup, t0: f64, t_max: f64, h: f64, opts: &CgsOptions) -> Result<Solved, CgsError> {
    let n = ((t_max - t0) / h).round() as usize + 1;
    let nodes = setup.nodes(t0, h, n)?;
    let rate = setup.p.lambda() / 2.0;
    let out = picard_iterate(
        |x: &Vec<[f64; 2]>| setup.apply(&nodes, h, x).map(|v| v.0),
        vec![[0.0; 2]; n],
        |a, b| weighted_dist(t0, h, rate, a, b),
        opts.tol,
        opts.max_iter,
    );
    match out {
        Ok(o) => {
            let (_, dx) = setup.apply(&nodes, h, &o.fixed_point)?;
            Ok(Solved { x: o.fixed_point, dx, ratios: o.ratios, deltas: o.deltas, iterations: o.iterations, nodes })
        }
        Err(PicardError::Operator(e)) => Err(e),
        Err(PicardError::Diverged { ratios, .. }) => Err(CgsError::NonContraction { t0_attempts: vec![t0], last_ratios: ratios }),
    }
}

/// A priori `T_max` with the forcing-driven tail below `tol/10`.
fn choose_t_max(setup: &Setup, t0: f64, opts: &CgsOptions) -> f64 {
    let p = setup.p;
    let lam = p.lambda();
    let g0 = p.mu * (setup.upper_orbit() + 0.1).powf(p.q);
    let mut t = t0 + opts.span;
    for _ in 0..400 {
        let c = setup.frame_bound(t);
        let bound = 2.0 * c * c * g0 * (-lam * t / 2.0).exp() * (1.0 / lam + 1.0 / (lam * lam * t.max(1.0)));
        if bound < opts.tol / 10.0 {
            break;
        }
        t += 5.0;
    }
    t0 + ((t - t0) / opts.h).ceil() * opts.h
}

/// A posteriori weighted tail from the last period of computed integrands.
fn tail_estimate(p: &Params, sol: &Solved, t_max: f64, h: f64) -> f64 {
    let lam = p.lambda();
    let n = sol.dx.len();
    let window = ((10.0 / h) as usize).min(n);
    let peak = sol.dx[n - window..].iter().map(|d| d[0].abs() + d[1].abs()).fold(0.0, f64::max);
    2.0 * peak / lam * (lam * t_max / 2.0).exp()
}

fn setup_for<'a>(p: &'a Params, spec: &OrbitSpec, regime: Regime) -> Result<Setup<'a>, CgsError> {
    let sb = sigma_bar(p);
    let orbit = if spec.sigma < sb { Some(OrbitData::build(p, spec.sigma)?) } else { None };
    let omega = (-f_prime(p, m0(p))).sqrt();
    Ok(Setup { p, regime, orbit, tau: spec.tau_angle, omega })
}

fn run(p: &Params, spec: &OrbitSpec, regime: Regime, opts: &CgsOptions) -> Result<CgsFixedPoint, CgsError> {
    p.validate()?;
    let setup = setup_for(p, spec, regime)?;
    let lam = p.lambda();
    let a0 = setup.lower_orbit();
    let mut t0 = opts.t0.unwrap_or_else(|| {
        let c = setup.frame_bound(0.0);
        ((2.0 / lam) * (c / a0).ln()).max(1.0)
    });
    let mut attempts = Vec::new();
    let mut last_ratios = Vec::new();
    for _ in 0..=opts.max_t0_doublings {
        attempts.push(t0);
        let mut t_max = choose_t_max(&setup, t0, opts);
        let attempt = (|| -> Result<(Solved, f64, f64), CgsError> {
            for _ in 0..4 {
                let s = solve_on_grid(&setup, t0, t_max, opts.h, opts)?;
                let tail = tail_estimate(p, &s, t_max, opts.h);
                if tail < opts.tol / 10.0 {
                    return Ok((s, t_max, tail));
                }
                t_max = t0 + ((t_max - t0) * 1.5 / opts.h).ceil() * opts.h;
            }
            let s = solve_on_grid(&setup, t0, t_max, opts.h, opts)?;
            let tail = tail_estimate(p, &s, t_max, opts.h);
            Ok((s, t_max, tail))
        })();
        match attempt {
            Ok((s, t_max, tail)) => {
                let rate = lam / 2.0;
                let path = WeightedPath::new(t0, opts.h, rate, s.x.clone(), s.dx.clone());
                let max_ratio = s.ratios.iter().copied().fold(0.0, f64::max);
                if max_ratio < opts.ratio_target && path.weighted_norm <= 1.0 {
                    return Ok(finish(p, spec, &setup, s, path, t_max, tail, attempts, opts));
                }
                last_ratios = s.ratios;
            }
            Err(CgsError::NonContraction { last_ratios: r, .. }) => last_ratios = r,
            Err(CgsError::Positivity { .. }) => {}
            Err(e) => return Err(e),
        }
        t0 *= 2.0;
    }
    Err(CgsError::NonContraction { t0_attempts: attempts, last_ratios })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    p: &Params,
    spec: &OrbitSpec,
    setup: &Setup,
    s: Solved,
    path: WeightedPath,
    t_max: f64,
    tail: f64,
    attempts: Vec<f64>,
    opts: &CgsOptions,
) -> CgsFixedPoint {
    let n = s.x.len();
    let mut v = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let (dv, dw) = setup.perturbation(&s.nodes, i, s.x[i]);
        v.push(s.nodes.phi[i] + dv);
        w.push(s.nodes.dphi[i] + dw);
    }
    let determinant_residual = match setup.regime {
        Regime::AwayFromMax => Some(
            (0..n)
                .map(|i| {
                    let nd = &s.nodes;
                    (f(p, nd.phi[i]) * nd.psi[i] - nd.dphi[i] * nd.dpsi[i] - 0.5).abs()
                })
                .fold(0.0, f64::max),
        ),
        Regime::NearMax => None,
    };
    let t0 = path.t0;
    let grid_halving_delta = if opts.grid_check {
        let coarse = CgsOptions { h: 2.0 * opts.h, ..opts.clone() };
        let tm = t0 + ((t_max - t0) / coarse.h).floor() * coarse.h;
        solve_on_grid(setup, t0, tm, coarse.h, &coarse).ok().map(|c| {
            (0..c.x.len())
                .map(|j| {
                    let (dv, _) = setup.perturbation(&c.nodes, j, c.x[j]);
                    (c.nodes.phi[j] + dv - v[2 * j]).abs()
                })
                .fold(0.0, f64::max)
        })
    } else {
        None
    };
    CgsFixedPoint {
        regime: setup.regime,
        sigma: spec.sigma,
        tau_angle: spec.tau_angle,
        path,
        t0,
        t_max,
        t0_attempts: attempts,
        ratio_history: s.ratios,
        deltas: s.deltas,
        iterations: s.iterations,
        tail_bound: tail,
        grid_halving_delta,
        determinant_residual,
        v,
        w,
        phi: s.nodes.phi,
        dphi: s.nodes.dphi,
    }
}

/// Fixed point in the away-from-`σ̄` regime.
pub fn cgs_fixed_point(p: &Params, spec: &OrbitSpec, opts: &CgsOptions) -> Result<CgsFixedPoint, CgsError> {
    opts.validate(p)?;
    let sb = sigma_bar(p);
    if spec.sigma > sb * (1.0 - opts.sigma_margin) {
        return Err(CgsError::Regime { sigma: spec.sigma, sigma_bar: sb, regime: Regime::AwayFromMax });
    }
    run(p, spec, Regime::AwayFromMax, opts)
}

/// Fixed point in the rotating frame, for `σ ∈ [σ̄(1 - 2·margin), σ̄]`.
pub fn cgs_fixed_point_near_max(p: &Params, spec: &OrbitSpec, opts: &CgsOptions) -> Result<CgsFixedPoint, CgsError> {
    opts.validate(p)?;
    let sb = sigma_bar(p);
    if spec.sigma < sb * (1.0 - 2.0 * opts.sigma_margin) {
        return Err(CgsError::Regime { sigma: spec.sigma, sigma_bar: sb, regime: Regime::NearMax });
    }
    run(p, spec, Regime::NearMax, opts)
}

/// Regime used by [`cgs_solution`] for a given σ.
pub fn regime_for(p: &Params, sigma: f64, margin: f64) -> Regime {
    if sigma > sigma_bar(p) * (1.0 - margin) {
        Regime::NearMax
    } else {
        Regime::AwayFromMax
    }
}

/// `A = [[0, 1], [f'(M0), 0]]` and `max_{t∈[0, t_end]} ‖e^{tA}‖` in the sum norm.
pub fn rotation_matrix_bound(p: &Params, t_end: f64, samples: usize) -> ([[f64; 2]; 2], f64) {
    let fp = f_prime(p, m0(p));
    let omega = (-fp).sqrt();
    let mut best: f64 = 0.0;
    for k in 0..=samples {
        let t = t_end * k as f64 / samples as f64;
        let (s, c) = (omega * t).sin_cos();
        let e = [[c, s / omega], [-omega * s, c]];
        let col0 = e[0][0].abs() + e[1][0].abs();
        let col1 = e[0][1].abs() + e[1][1].abs();
        best = best.max(col0.max(col1));
    }
    ([[0.0, 1.0], [fp, 0.0]], best)
}

/// Eigenvalues `±i·sqrt(-f'(M0))` of the linearisation at `M0`, as imaginary parts.
pub fn rotation_eigenvalues(p: &Params) -> (f64, f64) {
    let omega = (-f_prime(p, m0(p))).sqrt();
    (omega, -omega)
}

/// Solution of the Fowler system matched to the orbit `(σ, τ)`.
#[derive(Debug, Clone)]
pub struct CgsSolution {
    pub fixed_point: CgsFixedPoint,
    /// `(t, V, V')` with `t = log(1/r)`.
    pub trajectory: Trajectory,
    /// `sup e^{λt/2}|V - φ|` on `[T0, T0 + span]`.
    pub decay_certificate: f64,
    /// Sup difference between the reconstruction and a direct integration of
    /// the Fowler system from `(V(T0), W(T0))` over `[T0, T0 + span]`.
    pub system_residual: f64,
    /// `|V - φ| + |W - φ'|` at `T0 + 40`.
    pub gap_at_40: f64,
}

pub fn cgs_solution(p: &Params, spec: &OrbitSpec, opts: &CgsOptions) -> Result<CgsSolution, CgsError> {
    let fp = match regime_for(p, spec.sigma, opts.sigma_margin) {
        Regime::AwayFromMax => cgs_fixed_point(p, spec, opts)?,
        Regime::NearMax => cgs_fixed_point_near_max(p, spec, opts)?,
    };
    let times = fp.times();
    let t_end = fp.t0 + opts.span;
    let samples: Vec<State> = times
        .iter()
        .enumerate()
        .map(|(i, &t)| State::new(t, fp.v[i], fp.w[i]))
        .collect();
    let meta = format!(
        "cgs sigma={} tau_angle={} regime={} t0={} t_max={}",
        spec.sigma,
        spec.tau_angle,
        fp.regime.name(),
        fp.t0,
        fp.t_max
    );
    let trajectory = Trajectory::new(Chart::Log(Orientation::LogInvR), *p, samples, Vec::new(), meta);
    let decay_certificate = fp.decay_certificate(p, fp.t0, t_end);
    let system_residual = system_residual(p, &fp, t_end)?;
    let i40 = (((fp.t0 + 40.0 - fp.t0) / fp.path.h).round() as usize).min(fp.v.len() - 1);
    let gap_at_40 = (fp.v[i40] - fp.phi[i40]).abs() + (fp.w[i40] - fp.dphi[i40]).abs();
    Ok(CgsSolution { fixed_point: fp, trajectory, decay_certificate, system_residual, gap_at_40 })
}

fn system_residual(p: &Params, fp: &CgsFixedPoint, t_end: f64) -> Result<f64, CgsError> {
    let pp = *p;
    let lam = p.lambda();
    let m = p.two_star_s() - 1.0;
    let k2 = p.k() * p.k();
    let t_end = t_end.min(fp.t_max);
    let opts = OdeOptions { tol: Tolerance { rtol: 1e-12, atol: 1e-14 }, ..Default::default() };
    let sol = solve(
        move |t, y: &[f64; 2]| {
            let v = y[0].max(0.0);
            [y[1], k2 * y[0] - v.powf(m) + pp.mu * (-lam * t).exp() * v.powf(pp.q)]
        },
        fp.t0,
        [fp.v[0], fp.w[0]],
        t_end,
        &opts,
        &[],
    )
    .map_err(|e| CgsError::Numeric(e.to_string()))?;
    let mut worst: f64 = 0.0;
    for (i, &t) in fp.times().iter().enumerate() {
        if t > t_end {
            break;
        }
        if let Some(y) = sol.dense.eval(t) {
            worst = worst.max((y[0] - fp.v[i]).abs().max((y[1] - fp.w[i]).abs()));
        }
    }
    Ok(worst)
}

/// Agreement of the two regimes at `σ = σ̄(1 - 1.5·margin)`.
#[derive(Debug, Clone)]
pub struct OverlapReport {
    pub sigma: f64,
    pub t_from: f64,
    pub t_to: f64,
    pub sup_difference: f64,
    pub away: CgsFixedPoint,
    pub near: CgsFixedPoint,
}

pub fn regime_overlap(p: &Params, tau_angle: f64, opts: &CgsOptions) -> Result<OverlapReport, CgsError> {
    let sigma = sigma_bar(p) * (1.0 - 1.5 * opts.sigma_margin);
    let spec = OrbitSpec::new(p, sigma, tau_angle)?;
    let away = cgs_fixed_point(p, &spec, opts)?;
    let near = cgs_fixed_point_near_max(p, &spec, opts)?;
    let t_from = away.t0.max(near.t0);
    let t_to = t_from + opts.span;
    let mut worst: f64 = 0.0;
    let mut t = t_from;
    while t <= t_to {
        if let (Some(a), Some(b)) = (away.eval(t), near.eval(t)) {
            worst = worst.max((a.0 - b.0).abs() + (a.1 - b.1).abs());
        }
        t += 0.05;
    }
    Ok(OverlapReport { sigma, t_from, t_to, sup_difference: worst, away, near })
}

/// Period of the orbit the solution converges to, or of the linearisation at `σ̄`.
pub fn asymptotic_period(p: &Params, sigma: f64) -> Result<f64, CgsError> {
    if sigma >= sigma_bar(p) {
        return Ok(2.0 * PI / (-f_prime(p, m0(p))).sqrt());
    }
    Ok(2.0 * orbit_family::half_period(p, sigma)?)
}
