use crate::chart::{convert, second_derivative, Chart, State};
use crate::trajectory::Trajectory;
use crate::RadialError;

/// `ũ(ρ) = ρ^{2-n} u(1/ρ)`, returned in the `r` chart with increasing `ρ`.
pub fn kelvin_transform(traj: &Trajectory) -> Trajectory {
    let p = traj.params;
    let n = p.nf();
    let mut samples: Vec<State> = traj
        .samples
        .iter()
        .map(|s| {
            let st = convert(traj.chart, Chart::R, &p, *s);
            kelvin_state(n, st)
        })
        .collect();
    samples.sort_by(|a, b| a.coord.partial_cmp(&b.coord).unwrap());
    Trajectory::new(Chart::R, p, samples, Vec::new(), format!("kelvin of [{}]", traj.metadata))
}

fn kelvin_state(n: f64, st: State) -> State {
    let rho = 1.0 / st.coord;
    let v = rho.powf(2.0 - n) * st.value;
    let d = (2.0 - n) * rho.powf(1.0 - n) * st.value - rho.powf(-n) * st.deriv;
    State::new(rho, v, d)
}

/// Relative residual of the Kelvin image in the exterior equation
/// `-Δũ = ρ^{-s}ũ^{2*(s)-1} - μρ^{(n-2)q-(n+2)}ũ^q` at `ρ`.
///
/// `ũ''` is obtained by the chain rule from the source equation.
pub fn kelvin_residual(source: &Trajectory, rho: f64) -> Result<f64, RadialError> {
    let p = source.params;
    let n = p.nf();
    let r = 1.0 / rho;
    let st = source
        .eval_r(r)
        .map(|s| convert(source.chart, Chart::R, &p, s))
        .ok_or_else(|| RadialError::Domain(format!("rho = {rho} outside the transformed range")))?;
    let (u, du) = (st.value, st.deriv);
    let d2u = second_derivative(Chart::R, &p, r, u, du);
    let kt = kelvin_state(n, State::new(r, u, du));
    let d2k = (n - 2.0) * (n - 1.0) * rho.powf(-n) * u + (2.0 * n - 2.0) * rho.powf(-n - 1.0) * du + rho.powf(-n - 2.0) * d2u;
    let lap = -d2k - (n - 1.0) / rho * kt.deriv;
    let t1 = rho.powf(-p.s) * kt.value.powf(p.two_star_s() - 1.0);
    let t2 = p.mu * rho.powf((n - 2.0) * p.q - (n + 2.0)) * kt.value.powf(p.q);
    let scale = d2k.abs() + ((n - 1.0) / rho * kt.deriv).abs() + t1.abs() + t2.abs();
    Ok((lap - t1 + t2).abs() / scale.max(1e-300))
}
