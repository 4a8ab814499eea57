use crate::manifold::ManifoldGrid;
use crate::system::{diagonal_change, Direction};
use crate::NdError;
use radial_integrator::ode::Tolerance;
use radial_integrator::{Chart, State, Trajectory};

/// How far towards the origin the solution is traced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdHorizon {
    /// Decades of radius below `R = y20^{1/β}`.
    pub decades: f64,
    pub samples_per_decade: usize,
    pub tol: Tolerance,
}

impl Default for NdHorizon {
    fn default() -> Self {
        NdHorizon { decades: 4.0, samples_per_decade: 200, tol: Tolerance { rtol: 1e-12, atol: 1e-18 } }
    }
}

#[derive(Debug, Clone)]
pub struct NdSolution {
    /// `(r, u, u')`, increasing `r`.
    pub trajectory: Trajectory,
    pub y20: f64,
    pub z30: f64,
    /// `Y(0)` in the original variables.
    pub initial: [f64; 3],
    /// `(t, X(t))` with `t = r^{-β}`, increasing `t`.
    pub x_samples: Vec<(f64, [f64; 3])>,
    /// `max |y(τ) - 1/(τ + 1/y20)|` over the samples.
    pub center_flow_error: f64,
    /// `max |X2(t) - 1/t|`.
    pub x2_error: f64,
    /// Smallest `1 - X1 X2` seen.
    pub min_one_minus_x1x2: f64,
    /// `max |Tw - w|` at sampled points of the flow.
    pub manifold_defect: f64,
    /// `0 ≤ y ≤ y0` and `|z| ≤ max(y0, |z0|)` at every sample.
    pub flow_bounds_hold: bool,
    /// `r^ϑ u μ^{1/kq} - 1` at the smallest radius.
    pub limit_deviation: f64,
}

/// Traces one solution from the manifold point over `(y20, z30)`.
///
/// The unstable direction is never integrated: `Z1` is read off the graph
/// `w` along the reduced flow, and the remaining components follow from the
/// linear change of variables. Time is shifted so that `X2(t) = 1/t`.
pub fn nd_solution(grid: &ManifoldGrid, y20: f64, z30: f64, horizon: &NdHorizon) -> Result<NdSolution, NdError> {
    let r0 = grid.r0;
    if !(y20 > 0.0 && y20 <= r0 && z30.abs() <= r0) {
        return Err(NdError::Domain { y20, z30, r0 });
    }
    let p = grid.params;
    let c = grid.constants;
    let t_start = 1.0 / y20;
    let n = (horizon.decades * horizon.samples_per_decade as f64).ceil().max(2.0) as usize;
    let x_times: Vec<f64> = (0..=n).map(|k| t_start * 10f64.powf(c.beta * horizon.decades * k as f64 / n as f64)).collect();
    let span = x_times[n] - t_start;
    let flow = grid.flow(horizon.tol);
    let (dense, _) = flow.run(y20, z30, span)?;

    let to_y = |y: f64, z: f64| diagonal_change(&c, Direction::FromDiagonal, [flow.w(y, z), y, z]);
    let initial = to_y(y20, z30);
    let mut x_samples = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let (mut cf, mut x2e, mut min_one) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut bounds = true;
    let zmax = y20.max(z30.abs());
    for &t in &x_times {
        let tau = (t - t_start).clamp(0.0, span);
        let s = dense.eval(tau).ok_or_else(|| NdError::Integration(format!("no dense output at {tau}")))?;
        let (y, z) = (s[0], s[1]);
        bounds &= y >= 0.0 && y <= y20 * (1.0 + 1e-12) && z.abs() <= zmax * (1.0 + 1e-9);
        cf = cf.max((y - 1.0 / (tau + t_start)).abs());
        let x = to_y(y, z);
        x2e = x2e.max((x[1] - 1.0 / t).abs());
        let one = 1.0 - x[0] * x[1];
        min_one = min_one.min(one);
        if one < grid.epsilon {
            return Err(NdError::RegularizationBreach { t, value: one });
        }
        let r = t.powf(-1.0 / c.beta);
        let u = (one / (p.mu * r.powf(p.s))).powf(1.0 / c.kq);
        states.push(State::new(r, u, u * (x[2] - c.vartheta) / r));
        x_samples.push((t, x));
    }

    let mut defect: f64 = 0.0;
    for frac in [0.0, 0.001, 0.01, 0.1] {
        let s = dense.eval(frac * span).unwrap();
        defect = defect.max(grid.invariance_defect(s[0], s[1], horizon.tol)?);
    }

    let last = states.last().unwrap();
    let limit_deviation = last.coord.powf(c.vartheta) * last.value * p.mu.powf(1.0 / c.kq) - 1.0;
    states.reverse();
    let meta = format!("nd y20={y20:e} z30={z30:e} r0={r0:e}");
    let trajectory = Trajectory::new(Chart::R, p, states, Vec::new(), meta);
    Ok(NdSolution {
        trajectory,
        y20,
        z30,
        initial,
        x_samples,
        center_flow_error: cf,
        x2_error: x2e,
        min_one_minus_x1x2: min_one,
        manifold_defect: defect,
        flow_bounds_hold: bounds,
        limit_deviation,
    })
}

/// `max |log u_a - log u_b| + max |r u_a'/u_a - r u_b'/u_b|` over shared samples.
///
/// Both solutions must come from the same `y20` and horizon so that their
/// radius grids coincide.
pub fn sup_distance(a: &NdSolution, b: &NdSolution) -> f64 {
    let (mut dl, mut dd) = (0.0f64, 0.0f64);
    for (x, y) in a.trajectory.samples.iter().zip(&b.trajectory.samples) {
        dl = dl.max((x.value.ln() - y.value.ln()).abs());
        dd = dd.max((x.coord * x.deriv / x.value - y.coord * y.deriv / y.value).abs());
    }
    dl + dd
}
