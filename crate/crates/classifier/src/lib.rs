//! Labels a radial solution near its singularity at the origin.
//!
//! The decision is taken on the innermost decades of a finite trajectory, so
//! every verdict carries the numbers it was based on.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod corpus;

use mb_solver::{bump_analysis, BumpOptions};
use params_core::{DerivedConstants, Params, F0};
use pohozaev::pohozaev_limit;
use radial_integrator::{RadialPoint, Trajectory};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Removable,
    Nd,
    Cgs,
    Mb,
    Unknown,
}

impl Label {
    pub fn name(&self) -> &'static str {
        match self {
            Label::Removable => "Removable",
            Label::Nd => "ND",
            Label::Cgs => "CGS",
            Label::Mb => "MB",
            Label::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `z` counts as zero below this multiple of `Λ0`.
    pub z_zero_frac: f64,
    /// Relative tolerance on `r^ϑ u μ^{1/(q-2*(s)+1)} → 1`.
    pub nd: f64,
    /// Smallest energy level accepted as a periodic orbit.
    pub sigma: f64,
    /// Largest spread of `F0(z) - (rz')²` around its mean.
    pub sigma_fit: f64,
    /// `|P_limit|` counts as zero below this.
    pub p_zero: f64,
    /// `|r u'/u|` bound over the innermost decade for a bounded solution.
    pub removable_slope: f64,
    /// Window for the `z` proxies.
    pub proxy_decades: f64,
    pub min_decades: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            z_zero_frac: 1e-3,
            nd: 1e-2,
            sigma: 1e-4,
            sigma_fit: 1e-3,
            p_zero: 1e-4,
            removable_slope: 0.05,
            proxy_decades: 2.0,
            min_decades: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub decades: f64,
    pub coverage_ok: bool,
    /// Extremes of `z` over the innermost `proxy_decades`.
    pub z_liminf_proxy: f64,
    pub z_limsup_proxy: f64,
    /// `max |r u'/u|` over the innermost decade.
    pub u_log_slope: f64,
    /// `max |r^ϑ u μ^{1/kq} - 1|` over the innermost decade.
    pub nd_limit_deviation: Option<f64>,
    /// Mean of `F0(z) - (rz')²` over the proxy window.
    pub sigma_estimate: f64,
    pub sigma_spread: f64,
    pub p_limit: Option<f64>,
    /// Bumps supporting a multi-bump verdict.
    pub bump_count: usize,
    /// Deepest minimum of `z` between consecutive bumps.
    pub inter_bump_min: Option<f64>,
    pub bump_max: Option<f64>,
    pub nd_admissible: bool,
    pub mb_admissible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileClass {
    pub label: Label,
    pub evidence: Evidence,
}

fn window(points: &[RadialPoint], r_lo: f64, decades: f64) -> Vec<RadialPoint> {
    let r_hi = r_lo * 10f64.powf(decades);
    points.iter().filter(|q| q.r <= r_hi).copied().collect()
}

/// Collects the evidence and applies, in order: removable, ND, CGS, MB.
pub fn classify(traj: &Trajectory, p: &Params, th: &Thresholds) -> ProfileClass {
    let (lo, hi) = traj.r_range();
    let decades = if lo > 0.0 { (hi / lo).log10() } else { 0.0 };
    let dc = DerivedConstants::derive(p).ok();
    let lambda0 = dc.as_ref().map(|d| d.lambda0).unwrap_or(1.0);
    let pts = traj.log_grid(100);
    let inner = window(&pts, lo, th.proxy_decades);
    let innermost = window(&pts, lo, 1.0);

    let z_liminf = inner.iter().map(|q| q.z).fold(f64::INFINITY, f64::min);
    let z_limsup = inner.iter().map(|q| q.z).fold(f64::NEG_INFINITY, f64::max);
    let u_log_slope = innermost.iter().map(|q| (q.r * q.du / q.u).abs()).fold(0.0, f64::max);
    let nd_limit_deviation = match dc.as_ref().and_then(|d| d.vartheta) {
        Some(vt) if p.mu > 0.0 && p.kq() > 0.0 => Some(
            innermost
                .iter()
                .map(|q| (q.r.powf(vt) * q.u * p.mu.powf(1.0 / p.kq()) - 1.0).abs())
                .fold(0.0, f64::max),
        ),
        _ => None,
    };
    let sig: Vec<f64> = inner.iter().map(|q| F0(p, q.z) - q.rdz * q.rdz).collect();
    let sigma_estimate = sig.iter().sum::<f64>() / sig.len().max(1) as f64;
    let sigma_spread = sig.iter().map(|s| (s - sigma_estimate).abs()).fold(0.0, f64::max);
    let p_limit = pohozaev_limit(traj).value();

    let bumps = bump_analysis(traj, &BumpOptions::default());
    let inter_bump_min = if bumps.bumps.len() >= 2 {
        let mut m = f64::INFINITY;
        for w in bumps.bumps.windows(2) {
            let (a, b) = (w[1].r, w[0].r);
            for q in pts.iter().filter(|q| q.r > a && q.r < b) {
                m = m.min(q.z);
            }
        }
        Some(m)
    } else {
        None
    };
    let bump_max = bumps.bumps.iter().map(|b| b.z).fold(None, |acc: Option<f64>, z| Some(acc.map_or(z, |a| a.max(z))));

    let evidence = Evidence {
        decades,
        coverage_ok: decades >= th.min_decades,
        z_liminf_proxy: z_liminf,
        z_limsup_proxy: z_limsup,
        u_log_slope,
        nd_limit_deviation,
        sigma_estimate,
        sigma_spread,
        p_limit,
        bump_count: bumps.bumps.len(),
        inter_bump_min,
        bump_max,
        nd_admissible: p.nd_admissible(),
        mb_admissible: p.mb_admissible(),
    };
    let label = decide(&evidence, p, dc.as_ref(), lambda0, th);
    ProfileClass { label, evidence }
}

fn decide(e: &Evidence, p: &Params, dc: Option<&DerivedConstants>, lambda0: f64, th: &Thresholds) -> Label {
    if !e.coverage_ok || !e.z_liminf_proxy.is_finite() {
        return Label::Unknown;
    }
    if e.u_log_slope <= th.removable_slope {
        return Label::Removable;
    }
    if e.nd_admissible && e.nd_limit_deviation.is_some_and(|d| d <= th.nd) {
        return Label::Nd;
    }
    let sigma_bar = dc.map(|d| d.sigma_bar).unwrap_or(f64::INFINITY);
    let z_zero = th.z_zero_frac * lambda0;
    if e.sigma_estimate > th.sigma
        && e.sigma_estimate <= sigma_bar * (1.0 + 1e-6)
        && e.sigma_spread <= th.sigma_fit
        && e.z_liminf_proxy > z_zero
        && e.p_limit.is_some_and(|v| v > th.p_zero)
    {
        return Label::Cgs;
    }
    if e.mb_admissible
        && p.mu > 0.0
        && e.bump_count >= 2
        && e.inter_bump_min.is_some_and(|m| m <= z_zero)
        && e.bump_max.is_some_and(|m| m.is_finite() && m > z_zero)
        && e.p_limit.is_some_and(|v| v.abs() <= th.p_zero)
    {
        return Label::Mb;
    }
    Label::Unknown
}
