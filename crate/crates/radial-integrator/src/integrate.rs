use crate::chart::{second_derivative, xi_power, Chart, Orientation, State};
use crate::ode::{solve, EventFn, OdeOptions, Stop, Tolerance};
use crate::trajectory::{DenseRepr, Event, EventKind, Trajectory};
use crate::RadialError;
use params_core::Params;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventSpec {
    /// Stop when the value exceeds `ceiling`.
    BlowUp { ceiling: f64 },
    /// Record crossings of `z = r^{(n-2)/2}u` through `level`.
    ZCrossing { level: f64 },
    /// Stop when the value reaches zero.
    SignChange,
}

#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    pub tol: Tolerance,
    pub events: Vec<EventSpec>,
    pub max_steps: usize,
    pub h0: Option<f64>,
    pub h_max: Option<f64>,
}

impl IntegrateOptions {
    /// Blow-up ceiling at `1e8 × scale` plus positivity monitoring.
    pub fn with_scale(scale: f64) -> Self {
        IntegrateOptions {
            tol: Tolerance::default(),
            events: vec![EventSpec::BlowUp { ceiling: 1e8 * scale.abs().max(1e-300) }, EventSpec::SignChange],
            max_steps: 2_000_000,
            h0: None,
            h_max: None,
        }
    }

    pub fn plain() -> Self {
        IntegrateOptions { tol: Tolerance::default(), events: Vec::new(), max_steps: 2_000_000, h0: None, h_max: None }
    }
}

fn z_of(chart: Chart, p: &Params, coord: f64, value: f64) -> f64 {
    match chart {
        Chart::Log(_) => value,
        _ => chart.radius(p, coord).powf(p.k()) * value,
    }
}

/// Adaptive integration of the radial equation in `chart` from `initial` to `end`.
pub fn integrate(chart: Chart, p: &Params, initial: State, end: f64, opts: &IntegrateOptions) -> Result<Trajectory, RadialError> {
    p.validate()?;
    if !(initial.value > 0.0) {
        return Err(RadialError::NonPositive { coord: initial.coord, value: initial.value });
    }
    match chart {
        Chart::R | Chart::Xi if !(initial.coord > 0.0 && end > 0.0) => {
            return Err(RadialError::Domain("radial coordinates must stay positive".into()))
        }
        _ => {}
    }
    if !(end != initial.coord) {
        return Err(RadialError::Domain(format!("empty span at {}", initial.coord)));
    }
    let pp = *p;
    let events: Vec<EventFn<'_, 2>> = opts
        .events
        .iter()
        .map(|e| match *e {
            EventSpec::BlowUp { ceiling } => EventFn { g: Box::new(move |_, y: &[f64; 2]| ceiling - y[0]), terminal: true },
            EventSpec::ZCrossing { level } => {
                EventFn { g: Box::new(move |c, y: &[f64; 2]| z_of(chart, &pp, c, y[0]) - level), terminal: false }
            }
            EventSpec::SignChange => EventFn { g: Box::new(|_, y: &[f64; 2]| y[0]), terminal: true },
        })
        .collect();
    let ode_opts = OdeOptions { tol: opts.tol, h0: opts.h0, h_max: opts.h_max, max_steps: opts.max_steps };
    let sol = solve(
        |c, y: &[f64; 2]| [y[1], second_derivative(chart, &pp, c, y[0], y[1])],
        initial.coord,
        [initial.value, initial.deriv],
        end,
        &ode_opts,
        &events,
    )?;

    let mut evs: Vec<Event> = sol
        .events
        .iter()
        .map(|h| {
            let kind = match opts.events[h.index] {
                EventSpec::BlowUp { .. } => EventKind::BlowUp,
                EventSpec::ZCrossing { level } => EventKind::ZCrossing(level),
                EventSpec::SignChange => EventKind::SignChange,
            };
            Event { kind, coord: h.t }
        })
        .collect();

    let mut samples: Vec<State> = sol.t.iter().zip(&sol.y).map(|(t, y)| State::new(*t, y[0], y[1])).collect();
    if sol.stop == Stop::Collapse {
        let last = samples.last().copied().unwrap_or(initial);
        let scale = initial.value.abs().max(1e-300);
        if last.value > 1e3 * scale {
            evs.push(Event { kind: EventKind::BlowUp, coord: sol.t_stop });
        } else {
            return Err(RadialError::Numeric(format!(
                "step size underflow at coordinate {} with value {} (no blow-up)",
                sol.t_stop, last.value
            )));
        }
    }
    while samples.len() > 1 && !(samples.last().unwrap().value > 0.0) {
        samples.pop();
    }
    let meta = format!("integrate chart={} steps={} rejected={}", chart.name(), sol.steps, sol.rejected);
    Ok(Trajectory::new(chart, *p, samples, evs, meta).with_dense(DenseRepr { chart, out: sol.dense }))
}

#[derive(Debug, Clone)]
pub struct ShootOptions {
    pub tol: Tolerance,
    /// Seed step as a multiple of the natural `ξ` scale.
    pub seed_factor: f64,
    pub ceiling_factor: f64,
    pub max_steps: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions { tol: Tolerance::default(), seed_factor: 1e-4, ceiling_factor: 1e8, max_steps: 2_000_000 }
    }
}

/// Natural `ξ` length scale of the removable solution with `u(0) = γ`.
pub fn xi_scale(p: &Params, gamma: f64) -> f64 {
    let m = p.two_star_s() - 1.0;
    ((p.nf() - p.s) * (2.0 - p.s) / 2.0).sqrt() * gamma.powf((1.0 - m) / 2.0)
}

/// `y''(0)` for the removable solution with `y(0) = γ`.
pub fn xi_curvature_at_origin(p: &Params, gamma: f64) -> f64 {
    -2.0 * gamma.powf(p.two_star_s() - 1.0) / ((p.nf() - p.s) * (2.0 - p.s))
}

/// Series start `(y, y')` at small `ξ`.
pub fn removable_series(p: &Params, gamma: f64, xi: f64) -> (f64, f64) {
    let m = p.two_star_s() - 1.0;
    let g = 2.0 - p.s;
    let a = (2.0 * p.nf() - p.s - 2.0) / g;
    let kappa = 2.0 * p.s / g;
    let c2 = xi_curvature_at_origin(p, gamma) / 2.0;
    let c4 = -4.0 * m * gamma.powf(m - 1.0) * c2 / (g * g * (12.0 + 4.0 * a));
    let cb = 4.0 * p.mu * gamma.powf(p.q) / (g * g * (2.0 + kappa) * (1.0 + kappa + a));
    let y = gamma + c2 * xi * xi + c4 * xi.powi(4) + cb * xi.powf(2.0 + kappa);
    let dy = 2.0 * c2 * xi + 4.0 * c4 * xi.powi(3) + (2.0 + kappa) * cb * xi.powf(1.0 + kappa);
    (y, dy)
}

/// Removable solution with `u(0⁺) = γ`, integrated in the `ξ` chart from a
/// series seed and returned in the `r` chart up to `r_max` or blow-up.
pub fn shoot_removable(p: &Params, gamma: f64, r_max: f64, opts: &ShootOptions) -> Result<Trajectory, RadialError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(RadialError::Domain(format!("gamma = {gamma} must be positive")));
    }
    if !(r_max > 0.0) {
        return Err(RadialError::Domain(format!("r_max = {r_max} must be positive")));
    }
    let xi0 = opts.seed_factor * xi_scale(p, gamma);
    let xi_max = r_max.powf(xi_power(p));
    if xi0 >= xi_max {
        return Err(RadialError::Domain(format!("r_max = {r_max} is inside the seed step")));
    }
    let (y0, dy0) = removable_series(p, gamma, xi0);
    let iopts = IntegrateOptions {
        tol: opts.tol,
        events: vec![EventSpec::BlowUp { ceiling: opts.ceiling_factor * gamma }, EventSpec::SignChange],
        max_steps: opts.max_steps,
        h0: Some(xi0 * 0.1),
        h_max: None,
    };
    let traj = integrate(Chart::Xi, p, State::new(xi0, y0, dy0), xi_max, &iopts)?;
    let mut out = traj.to_chart(Chart::R);
    out.metadata = format!("shoot_removable gamma={gamma} xi0={xi0:e}; {}", traj.metadata);
    Ok(out)
}

/// Convenience: the same solution in the `t = log r` chart.
pub fn shoot_removable_log(p: &Params, gamma: f64, r_max: f64, opts: &ShootOptions) -> Result<Trajectory, RadialError> {
    Ok(shoot_removable(p, gamma, r_max, opts)?.to_chart(Chart::Log(Orientation::LogR)))
}
