//! One function per subcommand.

use crate::config::RunConfig;
use crate::output::Output;
use crate::{CliError, Command, Status};
use cgs_solver::{cgs_solution, CgsError, CgsOptions};
use classifier::{classify, Evidence, Thresholds};
use mb_solver::{bump_analysis, curvature_diagnostics, geometric_schedule, mb_continuation, MbConfig, MbError};
use nd_solver::{eigenpairs, manifold_fixed_point, nd_solution, sup_distance, NdConfig, NdError, NdHorizon};
use orbit_family::{OrbitData, OrbitError, OrbitSpec};
use params_core::{bubble_deriv, bubble_eval, bubble_peak_z, DerivedConstants, ParamError, Params};
use pohozaev::{pohozaev_limit, pohozaev_report, PohozaevLimit};
use radial_integrator::io::read_csv;
use radial_integrator::{shoot_removable, Chart, RadialError, ShootOptions, State, Tolerance, Trajectory};
use serde_json::{json, Value};
use std::io::{BufReader, Write};

fn param_err(e: ParamError) -> CliError {
    CliError::Validation(e.to_string())
}

fn radial_err(e: RadialError) -> CliError {
    match e {
        RadialError::Domain(_) | RadialError::Param(_) | RadialError::Parse(_) => CliError::Validation(e.to_string()),
        _ => CliError::Numeric(e.to_string()),
    }
}

fn orbit_err(e: OrbitError) -> CliError {
    match e {
        OrbitError::SigmaRange { .. } | OrbitError::NearMaximum { .. } | OrbitError::Param(_) => {
            CliError::Validation(e.to_string())
        }
        _ => CliError::Numeric(e.to_string()),
    }
}

fn cgs_err(e: CgsError) -> CliError {
    match e {
        CgsError::Orbit(o) => orbit_err(o),
        CgsError::Param(_) | CgsError::Regime { .. } | CgsError::Options(_) => CliError::Validation(e.to_string()),
        _ => CliError::Numeric(e.to_string()),
    }
}

fn nd_err(e: NdError) -> CliError {
    match e {
        NdError::NotAdmissible { .. } | NdError::Undefined(_) | NdError::Param(_) | NdError::Domain { .. } => {
            CliError::Validation(e.to_string())
        }
        _ => CliError::Numeric(e.to_string()),
    }
}

fn mb_err(e: MbError) -> CliError {
    match e {
        MbError::NotAdmissible { .. } | MbError::Param(_) | MbError::Config(_) | MbError::Domain(_) => {
            CliError::Validation(e.to_string())
        }
        MbError::Radial(r) => radial_err(r),
        MbError::BoundViolation { .. } => CliError::Numeric(e.to_string()),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    let mut o = std::io::stdout().lock();
    match writeln!(o, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
        _ => Ok(()),
    }
}

/// `null` for non-finite values.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn opt(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

pub fn params(cfg: &RunConfig) -> Result<Params, CliError> {
    let n = cfg.int("params.n").ok_or_else(|| CliError::Validation("missing `params.n`".into()))?;
    let n = u32::try_from(n).map_err(|_| CliError::Validation(format!("params.n = {n} is too large")))?;
    let p = Params::new(n, cfg.require_f64("params.s")?, cfg.require_f64("params.mu")?, cfg.require_f64("params.q")?)
        .map_err(param_err)?;
    match cfg.f64("params.R") {
        Some(r) => p.with_radius(r).map_err(param_err),
        None => Ok(p),
    }
}

fn tolerance_json(t: Tolerance) -> Value {
    json!({ "rtol": t.rtol, "atol": t.atol })
}

pub fn run(cmd: &Command, cfg: &RunConfig, out: &mut Output, tol: &mut Value) -> Result<Status, CliError> {
    let p = params(cfg)?;
    match cmd {
        Command::Constants { json, .. } => constants(&p, *json, out),
        Command::Bubble { .. } => bubble(&p, cfg, out),
        Command::Shoot { .. } => shoot(&p, cfg, out, tol),
        Command::Orbit { .. } => orbit(&p, cfg, out),
        Command::Cgs { .. } => cgs(&p, cfg, out, tol),
        Command::Nd { .. } => nd(&p, cfg, out, tol),
        Command::Mb { .. } => mb(&p, cfg, out, tol),
        Command::Pohozaev { .. } => pohozaev(&p, cfg, out, tol),
        Command::Classify { .. } => classify_cmd(&p, cfg, out),
    }
}

pub fn constants_json(p: &Params) -> Result<Value, CliError> {
    let dc = DerivedConstants::derive(p).map_err(param_err)?;
    Ok(Value::Object(
        dc.entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.map(num).unwrap_or_else(|| json!("undefined"))))
            .collect(),
    ))
}

fn constants(p: &Params, to_stdout: bool, out: &mut Output) -> Result<Status, CliError> {
    let map = constants_json(p)?;
    if to_stdout {
        emit(&serde_json::to_string_pretty(&map).map_err(|e| CliError::Io(e.to_string()))?)?;
    } else if let Value::Object(m) = &map {
        let lines: Vec<String> = m.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        emit(&lines.join("\n"))?;
    }
    out.json("constants.json", &map)?;
    Ok(Status::Ok)
}

fn bubble(p: &Params, cfg: &RunConfig, out: &mut Output) -> Result<Status, CliError> {
    let eta = cfg.f64_or("bubble.eta", 1.0);
    let (lo, hi) = (cfg.f64_or("bubble.rmin", 1e-3), cfg.f64_or("bubble.rmax", 1e3));
    let per_decade = cfg.int("bubble.per_decade").unwrap_or(100).max(1) as f64;
    if !(eta > 0.0 && lo > 0.0 && hi > lo) {
        return Err(CliError::Validation(format!("need eta > 0 and 0 < rmin < rmax (got {eta}, {lo}, {hi})")));
    }
    let n = ((hi / lo).log10() * per_decade).ceil().max(1.0) as usize;
    let samples = (0..=n)
        .map(|i| {
            let r = (lo * (hi / lo).powf(i as f64 / n as f64)).clamp(lo, hi);
            State::new(r, bubble_eval(p, eta, r), bubble_deriv(p, eta, r))
        })
        .collect();
    let traj = Trajectory::new(Chart::R, *p, samples, Vec::new(), format!("bubble eta={eta}"));
    out.trajectory("bubble.csv", &traj)?;
    out.json("bubble.json", &json!({ "eta": eta, "peak_z": bubble_peak_z(p), "exact": p.mu == 0.0 }))?;
    Ok(Status::Ok)
}

fn shoot_options(cfg: &RunConfig, section: &str) -> ShootOptions {
    let mut o = ShootOptions::default();
    o.tol.rtol = cfg.f64_or(&format!("{section}.rtol"), o.tol.rtol);
    o.tol.atol = cfg.f64_or(&format!("{section}.atol"), o.tol.atol);
    o
}

fn shoot(p: &Params, cfg: &RunConfig, out: &mut Output, tol: &mut Value) -> Result<Status, CliError> {
    let gamma = cfg.require_f64("shoot.gamma")?;
    let rmax = cfg.require_f64("shoot.rmax")?;
    let opts = shoot_options(cfg, "shoot");
    *tol = json!({ "ode": tolerance_json(opts.tol), "ceiling_factor": opts.ceiling_factor });
    let traj = shoot_removable(p, gamma, rmax, &opts).map_err(radial_err)?;
    out.trajectory("trajectory.csv", &traj)?;
    let (lo, hi) = traj.r_range();
    let events: Vec<Value> = traj
        .events
        .iter()
        .map(|e| json!({ "kind": e.kind.label(), "r": num(traj.chart.radius(p, e.coord)) }))
        .collect();
    let end = traj.radial_points().last().copied();
    out.json(
        "summary.json",
        &json!({
            "gamma": gamma,
            "r_min": lo,
            "r_max": hi,
            "samples": traj.len(),
            "events": events,
            "u_end": opt(end.map(|e| e.u)),
            "z_end": opt(end.map(|e| e.z)),
            "pohozaev_limit": opt(pohozaev_limit(&traj).value()),
        }),
    )?;
    Ok(Status::Ok)
}

fn orbit(p: &Params, cfg: &RunConfig, out: &mut Output) -> Result<Status, CliError> {
    let sigma = cfg.require_f64("orbit.sigma")?;
    let o = OrbitData::build(p, sigma).map_err(orbit_err)?;
    let rows: Vec<Vec<Option<f64>>> = o
        .samples
        .iter()
        .map(|s| vec![Some(s.t), Some(s.phi), Some(s.dphi), Some(s.dphi_dsigma), Some(s.ddphi_dsigma)])
        .collect();
    out.table("orbit.csv", "t,phi,dphi,dphi_dsigma,ddphi_dsigma", &rows)?;
    out.json(
        "orbit.json",
        &json!({ "sigma": sigma, "a": o.a_sigma, "b": o.b_sigma, "t_sigma": o.t_sigma, "period": o.period() }),
    )?;
    Ok(Status::Ok)
}

fn cgs(p: &Params, cfg: &RunConfig, out: &mut Output, tol: &mut Value) -> Result<Status, CliError> {
    let sigma = cfg.require_f64("cgs.sigma")?;
    let spec = OrbitSpec::new(p, sigma, cfg.f64_or("cgs.tau_angle", 0.0)).map_err(orbit_err)?;
    let mut opts = CgsOptions::default();
    opts.span = cfg.f64_or("cgs.horizon", opts.span);
    opts.h = cfg.f64_or("cgs.h", opts.h);
    opts.tol = cfg.f64_or("cgs.tol", opts.tol);
    *tol = json!({ "picard": opts.tol, "h": opts.h, "ratio_target": opts.ratio_target, "sigma_margin": opts.sigma_margin });
    let sol = cgs_solution(p, &spec, &opts).map_err(cgs_err)?;
    let fp = &sol.fixed_point;
    out.trajectory("trajectory.csv", &sol.trajectory)?;
    out.json(
        "certificate.json",
        &json!({
            "sigma": fp.sigma,
            "tau_angle": fp.tau_angle,
            "regime": fp.regime.name(),
            "t0": fp.t0,
            "t_max": fp.t_max,
            "t0_attempts": nums(&fp.t0_attempts),
            "ratio_history": nums(&fp.ratio_history),
            "weighted_norm": num(sol.decay_certificate),
            "residual": num(sol.system_residual),
            "tail_bound": num(fp.tail_bound),
            "grid_halving_delta": opt(fp.grid_halving_delta),
            "iterations": fp.iterations,
        }),
    )?;
    Ok(Status::Ok)
}

fn nd(p: &Params, cfg: &RunConfig, out: &mut Output, tol: &mut Value) -> Result<Status, CliError> {
    let mut c = NdConfig::default();
    c.ny = cfg.int("nd.ny").map_or(c.ny, |v| v as usize);
    c.nz = cfg.int("nd.nz").map_or(c.nz, |v| v as usize);
    c.tol = cfg.f64_or("nd.tol", c.tol);
    if c.ny < 2 || c.nz < 2 {
        return Err(CliError::Validation("nd.ny and nd.nz must be at least 2".into()));
    }
    let mut horizon = NdHorizon::default();
    horizon.decades = cfg.f64_or("nd.decades", horizon.decades);
    *tol = json!({ "picard": c.tol, "ode": tolerance_json(c.ode_tol), "flow": tolerance_json(horizon.tol), "epsilon": c.epsilon });
    let grid = manifold_fixed_point(p, &c).map_err(nd_err)?;
    let y20 = cfg.f64_or("nd.y20", grid.r0);
    let z30s: Vec<f64> = match cfg.int("nd.z30_sweep") {
        Some(0) => return Err(CliError::Validation("nd.z30_sweep must be positive".into())),
        Some(1) | None => vec![cfg.f64_or("nd.z30", 0.0)],
        Some(k) => (0..k).map(|i| grid.r0 * (i as f64 / (k - 1) as f64 - 0.5)).collect(),
    };
    let sols = z30s.iter().map(|&z| nd_solution(&grid, y20, z, &horizon).map_err(nd_err)).collect::<Result<Vec<_>, _>>()?;
    let mut per = Vec::new();
    for (i, s) in sols.iter().enumerate() {
        let name = if sols.len() == 1 { "trajectory.csv".to_string() } else { format!("trajectory_{i}.csv") };
        out.trajectory(&name, &s.trajectory)?;
        per.push(json!({
            "file": name,
            "y20": s.y20,
            "z30": s.z30,
            "center_flow_error": num(s.center_flow_error),
            "x2_error": num(s.x2_error),
            "manifold_defect": num(s.manifold_defect),
            "min_one_minus_x1x2": num(s.min_one_minus_x1x2),
            "flow_bounds_hold": s.flow_bounds_hold,
            "limit_deviation": num(s.limit_deviation),
        }));
    }
    let mut min_distance = f64::INFINITY;
    for i in 0..sols.len() {
        for j in i + 1..sols.len() {
            min_distance = min_distance.min(sup_distance(&sols[i], &sols[j]));
        }
    }
    let checklist: Vec<Value> = grid
        .radius
        .checklist
        .iter()
        .map(|ch| json!({ "name": ch.name, "lhs": num(ch.lhs), "rhs": num(ch.rhs), "holds": ch.holds }))
        .collect();
    let bounds: Value = grid.radius.bounds.iter().map(|(k, v)| (k.to_string(), num(*v))).collect::<serde_json::Map<_, _>>().into();
    out.json(
        "certificate.json",
        &json!({
            "r0": grid.r0,
            "c1": grid.c1,
            "c2": grid.c2,
            "bounds": bounds,
            "checklist": checklist,
            "ratios": nums(&grid.ratios),
            "final_delta": num(grid.final_delta),
            "eigenvalues": nums(&eigenpairs(&grid.constants).map(|e| e.0)),
            "grid": { "ny": grid.ny, "nz": grid.nz },
            "solutions": per,
            "min_pairwise_distance": if sols.len() > 1 { num(min_distance) } else { Value::Null },
        }),
    )?;
    Ok(Status::Ok)
}

fn mb(p: &Params, cfg: &RunConfig, out: &mut Output, tol: &mut Value) -> Result<Status, CliError> {
    let lambda_cap = cfg.require_f64("mb.Lambda")?;
    let schedule = geometric_schedule(
        cfg.f64_or("mb.gamma_start", 10.0),
        cfg.f64_or("mb.gamma_ratio", 10.0),
        cfg.f64_or("mb.gamma_end", 1e16),
    );
    if schedule.len() < 2 {
        return Err(CliError::Validation("the gamma schedule needs at least two values".into()));
    }
    let mut c = MbConfig::new(lambda_cap, schedule);
    c.r_min = cfg.f64("mb.r_min");
    *tol = json!({ "ode": tolerance_json(c.tol), "bump_prominence_frac": c.bumps.prominence_frac });
    let run = mb_continuation(p, &c).map_err(mb_err)?;
    out.trajectory("candidate.csv", &run.candidate)?;
    if cfg.bool_or("mb.save_members", false) {
        for (i, m) in run.members.iter().enumerate() {
            out.trajectory(&format!("members/member_{i:03}.csv"), &m.trajectory)?;
        }
    }
    let report = bump_analysis(&run.candidate, &c.bumps);
    let bumps: Vec<Value> = report
        .bumps
        .iter()
        .map(|b| json!({ "r": num(b.r), "z": num(b.z), "prominence": num(b.prominence), "peak_deviation": num(b.peak_deviation) }))
        .collect();
    let members: Vec<Value> = run
        .members
        .iter()
        .map(|m| json!({ "gamma": m.gamma, "z_max": num(m.z_max), "energy_max_increase": num(m.energy_max_increase) }))
        .collect();
    let curvature = match cfg.f64("mb.ell") {
        Some(ell) => {
            let d = curvature_diagnostics(&run.candidate, p, ell).map_err(mb_err)?;
            json!({
                "ell": ell,
                "inf_drop": num(d.inf_drop),
                "sup_growth": num(d.sup_growth),
                "k_at_min_r": num(d.k_at_min_r),
                "z_minima": d.at_z_minima.len(),
            })
        }
        None => Value::Null,
    };
    let p_limit = pohozaev_limit(&run.candidate).value();
    out.json(
        "report.json",
        &json!({
            "Lambda": lambda_cap,
            "R_Lambda": run.r_lambda,
            "bound_ok": run.bound_ok,
            "members": members,
            "bumps": bumps,
            "ratios": nums(&report.spacing_ratios),
            "spacing_decreasing": report.spacing_decreasing(),
            "P_limit": opt(p_limit),
            "candidate_gamma": run.candidate_gamma,
            "r_min": run.r_min,
            "resolved_radius": num(run.resolved_radius),
            "cauchy_trend": run.cauchy.cauchy_trend,
            "inconclusive": run.inconclusive,
            "curvature": curvature,
        }),
    )?;
    if !run.bound_ok {
        return Err(CliError::Numeric(format!("z exceeded Lambda = {lambda_cap} on some member")));
    }
    if run.inconclusive {
        return Ok(Status::Inconclusive("successive differences are not monotone along the gamma schedule".into()));
    }
    Ok(Status::Ok)
}

fn read_trajectory(p: &Params, path: &str, chart: &str) -> Result<Trajectory, CliError> {
    let chart = Chart::from_name(chart)
        .ok_or_else(|| CliError::Validation(format!("unknown chart `{chart}` (r, xi, log_r, log_inv_r)")))?;
    let f = std::fs::File::open(path).map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
    read_csv(BufReader::new(f), chart, *p).map_err(|e| CliError::Validation(format!("{path}: {e}")))
}

fn pohozaev(p: &Params, cfg: &RunConfig, out: &mut Output, tol: &mut Value) -> Result<Status, CliError> {
    let traj = match cfg.text("pohozaev.input") {
        Some(path) => read_trajectory(p, path, cfg.text("pohozaev.chart").unwrap_or("r"))?,
        None => {
            let opts = ShootOptions::default();
            *tol = json!({ "ode": tolerance_json(opts.tol) });
            shoot_removable(p, cfg.require_f64("pohozaev.gamma")?, cfg.require_f64("pohozaev.rmax")?, &opts)
                .map_err(radial_err)?
        }
    };
    let per_decade = cfg.int("pohozaev.per_decade").unwrap_or(20).max(1) as usize;
    let rep = pohozaev_report(&traj, per_decade).map_err(|e| CliError::Numeric(e.to_string()))?;
    let rows: Vec<Vec<Option<f64>>> = rep
        .r_values
        .iter()
        .zip(&rep.p_r)
        .enumerate()
        .map(|(i, (&r, &pr))| vec![Some(r), Some(pr), i.checked_sub(1).map(|j| rep.increment_residuals[j])])
        .collect();
    out.table("pohozaev.csv", "r,P_r,increment_residual", &rows)?;
    let (limit, spread) = match rep.limit {
        PohozaevLimit::Estimate(e) => (num(e.value), num(e.spread)),
        PohozaevLimit::Inconclusive { .. } => (Value::Null, Value::Null),
    };
    let worst = rep.increment_residuals.iter().copied().fold(0.0, f64::max);
    out.json(
        "pohozaev.json",
        &json!({ "limit": limit, "spread": spread, "decades": traj.decades(), "max_increment_residual": num(worst) }),
    )?;
    match rep.limit {
        PohozaevLimit::Estimate(_) => Ok(Status::Ok),
        PohozaevLimit::Inconclusive { decades } => {
            Ok(Status::Inconclusive(format!("{decades:.2} decades of radius, at least 3 needed for the limit")))
        }
    }
}

pub fn evidence_json(e: &Evidence) -> Value {
    json!({
        "decades": num(e.decades),
        "coverage_ok": e.coverage_ok,
        "z_liminf_proxy": num(e.z_liminf_proxy),
        "z_limsup_proxy": num(e.z_limsup_proxy),
        "u_log_slope": num(e.u_log_slope),
        "nd_limit_deviation": opt(e.nd_limit_deviation),
        "sigma_estimate": num(e.sigma_estimate),
        "sigma_spread": num(e.sigma_spread),
        "P_limit": opt(e.p_limit),
        "bump_count": e.bump_count,
        "inter_bump_min": opt(e.inter_bump_min),
        "bump_max": opt(e.bump_max),
        "nd_admissible": e.nd_admissible,
        "mb_admissible": e.mb_admissible,
    })
}

fn classify_cmd(p: &Params, cfg: &RunConfig, out: &mut Output) -> Result<Status, CliError> {
    let traj = read_trajectory(p, cfg.require_text("classify.input")?, cfg.text("classify.chart").unwrap_or("r"))?;
    let c = classify(&traj, p, &Thresholds::default());
    let verdict = json!({ "label": c.label.name(), "evidence": evidence_json(&c.evidence) });
    emit(&serde_json::to_string_pretty(&verdict).map_err(|e| CliError::Io(e.to_string()))?)?;
    out.json("verdict.json", &verdict)?;
    if c.label == classifier::Label::Unknown {
        return Ok(Status::Inconclusive("no profile matched; see the evidence".into()));
    }
    Ok(Status::Ok)
}
