use crate::RadialError;
use params_core::{f, Params};

/// Orientation of the logarithmic variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `t = log r`
    LogR,
    /// `t = log(1/r)`
    LogInvR,
}

/// Coordinate chart for radial solutions.
///
/// * `R`: `(r, u, u')`
/// * `Xi`: `(ξ, y, y')` with `ξ = r^{(2-s)/2}`, `y(ξ) = u(r)`
/// * `Log`: `(t, w, w')` with `w = r^{(n-2)/2} u`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    R,
    Xi,
    Log(Orientation),
}

impl Chart {
    pub fn name(&self) -> &'static str {
        match self {
            Chart::R => "r",
            Chart::Xi => "xi",
            Chart::Log(Orientation::LogR) => "log_r",
            Chart::Log(Orientation::LogInvR) => "log_inv_r",
        }
    }

    pub fn from_name(s: &str) -> Option<Chart> {
        Some(match s {
            "r" => Chart::R,
            "xi" => Chart::Xi,
            "log_r" => Chart::Log(Orientation::LogR),
            "log_inv_r" => Chart::Log(Orientation::LogInvR),
            _ => return None,
        })
    }

    /// Radius for a chart coordinate.
    pub fn radius(&self, p: &Params, coord: f64) -> f64 {
        match self {
            Chart::R => coord,
            Chart::Xi => coord.powf(1.0 / xi_power(p)),
            Chart::Log(Orientation::LogR) => coord.exp(),
            Chart::Log(Orientation::LogInvR) => (-coord).exp(),
        }
    }

    /// Chart coordinate for a radius.
    pub fn coord(&self, p: &Params, r: f64) -> f64 {
        match self {
            Chart::R => r,
            Chart::Xi => r.powf(xi_power(p)),
            Chart::Log(Orientation::LogR) => r.ln(),
            Chart::Log(Orientation::LogInvR) => -r.ln(),
        }
    }
}

/// `(2-s)/2`
pub fn xi_power(p: &Params) -> f64 {
    (2.0 - p.s) / 2.0
}

/// A point of a solution in some chart: coordinate, value and first derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub coord: f64,
    pub value: f64,
    pub deriv: f64,
}

impl State {
    pub fn new(coord: f64, value: f64, deriv: f64) -> Self {
        State { coord, value, deriv }
    }
}

/// Second derivative in `chart`, with the value clipped at zero inside powers.
///
/// Used by the integrator so that a solution crossing zero produces a
/// finite right-hand side and the sign-change event can be located.
pub(crate) fn second_derivative(chart: Chart, p: &Params, coord: f64, value: f64, deriv: f64) -> f64 {
    let v = value.max(0.0);
    let m = p.two_star_s() - 1.0;
    match chart {
        Chart::R => {
            let r = coord;
            -(p.nf() - 1.0) / r * deriv - r.powf(-p.s) * v.powf(m) + p.mu * v.powf(p.q)
        }
        Chart::Xi => {
            let xi = coord;
            let a = (2.0 * p.nf() - p.s - 2.0) / (2.0 - p.s);
            let kappa = 2.0 * p.s / (2.0 - p.s);
            let g = 2.0 - p.s;
            -(a / xi) * deriv - 4.0 * (v.powf(m) - p.mu * xi.powf(kappa) * v.powf(p.q)) / (g * g)
        }
        Chart::Log(o) => {
            let lt = match o {
                Orientation::LogR => coord,
                Orientation::LogInvR => -coord,
            };
            let forcing = if p.mu == 0.0 { 0.0 } else { p.mu * (p.lambda() * lt).exp() * v.powf(p.q) };
            f(p, v) + forcing
        }
    }
}

/// Right-hand side of the first-order system `(value', deriv')`.
pub fn rhs_eval(chart: Chart, p: &Params, st: State) -> Result<(f64, f64), RadialError> {
    if !(st.value > 0.0) {
        return Err(RadialError::NonPositive { coord: st.coord, value: st.value });
    }
    match chart {
        Chart::R if !(st.coord > 0.0) => return Err(RadialError::Domain(format!("r = {} must be positive", st.coord))),
        Chart::Xi if !(st.coord > 0.0) => {
            return Err(RadialError::Domain(format!(
                "xi = {} must be positive; the origin is reached through the series start",
                st.coord
            )))
        }
        Chart::Log(_) if !st.coord.is_finite() => {
            return Err(RadialError::Domain(format!("t = {} must be finite", st.coord)))
        }
        _ => {}
    }
    Ok((st.deriv, second_derivative(chart, p, st.coord, st.value, st.deriv)))
}

fn to_r(chart: Chart, p: &Params, st: State) -> State {
    let k = p.k();
    match chart {
        Chart::R => st,
        Chart::Xi => {
            let pe = xi_power(p);
            let r = st.coord.powf(1.0 / pe);
            State::new(r, st.value, st.deriv * pe * r.powf(pe - 1.0))
        }
        Chart::Log(o) => {
            let (r, dlog) = match o {
                Orientation::LogR => (st.coord.exp(), st.deriv),
                Orientation::LogInvR => ((-st.coord).exp(), -st.deriv),
            };
            let rk = r.powf(-k);
            State::new(r, rk * st.value, rk / r * (dlog - k * st.value))
        }
    }
}

fn from_r(chart: Chart, p: &Params, st: State) -> State {
    let k = p.k();
    let r = st.coord;
    match chart {
        Chart::R => st,
        Chart::Xi => {
            let pe = xi_power(p);
            State::new(r.powf(pe), st.value, st.deriv * r.powf(1.0 - pe) / pe)
        }
        Chart::Log(o) => {
            let rk = r.powf(k);
            let dlog = rk * (k * st.value + r * st.deriv);
            match o {
                Orientation::LogR => State::new(r.ln(), rk * st.value, dlog),
                Orientation::LogInvR => State::new(-r.ln(), rk * st.value, -dlog),
            }
        }
    }
}

/// Pointwise chain-rule conversion of a state between charts.
pub fn convert(from: Chart, to: Chart, p: &Params, st: State) -> State {
    if from == to {
        return st;
    }
    from_r(to, p, to_r(from, p, st))
}

/// `z = r^{(n-2)/2} u` and `r z'` for an `R`-chart state.
pub fn z_pair(p: &Params, st: State) -> (f64, f64) {
    let k = p.k();
    let rk = st.coord.powf(k);
    (rk * st.value, rk * (k * st.value + st.coord * st.deriv))
}
