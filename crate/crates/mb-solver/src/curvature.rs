use crate::MbError;
use params_core::Params;
use radial_integrator::Trajectory;

/// `q = 2* - 1 - 2ℓ/(n-2)`.
pub fn corollary_q(n: u32, ell: f64) -> f64 {
    let nf = n as f64;
    2.0 * nf / (nf - 2.0) - 1.0 - 2.0 * ell / (nf - 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub r: f64,
    /// `K = 1 - μ r^s u^{q-2*(s)+1}`.
    pub k: f64,
    /// `r^{1-ℓ}|K'| = μ z^C |ℓ + C rz'/z|`, `C = 2(s-ℓ)/(n-2)`.
    pub d: f64,
    pub running_inf: f64,
    pub running_sup: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub ell: f64,
    pub c: f64,
    /// Ordered by decreasing radius.
    pub samples: Vec<CurvatureSample>,
    /// `(r, d)` at local minima of `z`.
    pub at_z_minima: Vec<(f64, f64)>,
    /// `K` at the smallest radius.
    pub k_at_min_r: f64,
    /// `d` at the outermost sample over its smallest value at a minimum of `z`.
    pub inf_drop: f64,
    /// Final running sup over `d` at the outermost sample.
    pub sup_growth: f64,
    /// Final running sup over the running sup after the outer half of the decades.
    pub sup_late_growth: f64,
}

pub fn curvature_diagnostics(traj: &Trajectory, p: &Params, ell: f64) -> Result<CurvatureReport, MbError> {
    let nf = p.nf();
    let cap = ((nf - 2.0) / 2.0).min(2.0);
    if !(ell > 0.0 && ell < cap) {
        return Err(MbError::Domain(format!("ell = {ell} outside (0, {cap})")));
    }
    if (ell - p.s).abs() < 1e-12 {
        return Err(MbError::Domain(format!("ell = s = {} is excluded", p.s)));
    }
    let qc = corollary_q(p.n, ell);
    if (p.q - qc).abs() > 1e-9 * qc.abs() {
        return Err(MbError::Domain(format!("q = {} does not match ell = {ell} (needs q = {qc})", p.q)));
    }
    let c = 2.0 * (p.s - ell) / (nf - 2.0);
    let mut pts = traj.log_grid(200);
    pts.reverse();
    if pts.len() < 3 {
        return Err(MbError::Domain("trajectory too short".into()));
    }
    let mut samples = Vec::with_capacity(pts.len());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for q in &pts {
        let zc = q.z.powf(c);
        let d = p.mu * zc * (ell + c * q.rdz / q.z).abs();
        lo = lo.min(d);
        hi = hi.max(d);
        samples.push(CurvatureSample { r: q.r, k: 1.0 - p.mu * q.r.powf(ell) * zc, d, running_inf: lo, running_sup: hi });
    }
    let at_z_minima: Vec<(f64, f64)> = (1..pts.len() - 1)
        .filter(|&i| pts[i].z < pts[i - 1].z && pts[i].z <= pts[i + 1].z)
        .map(|i| (pts[i].r, samples[i].d))
        .collect();
    let first = samples[0].d;
    let min_at_minima = at_z_minima.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    let inf_drop = if min_at_minima.is_finite() { first / min_at_minima } else { 1.0 };
    let last = samples.last().unwrap();
    let (r_hi, r_lo) = (samples[0].r, last.r);
    let r_mid = (r_hi * r_lo).sqrt();
    let mid = samples.iter().take_while(|s| s.r >= r_mid).last().map(|s| s.running_sup).unwrap_or(first);
    Ok(CurvatureReport {
        ell,
        c,
        k_at_min_r: last.k,
        inf_drop,
        sup_growth: last.running_sup / first,
        sup_late_growth: last.running_sup / mid,
        at_z_minima,
        samples,
    })
}
