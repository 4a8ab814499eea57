//! The family of positive periodic solutions of `φ'' = f(φ)`.
//!
//! Each orbit is identified by its energy `σ = F0(φ) - φ'²` in `(0, σ̄]` and a
//! phase angle `τ ∈ [0, 2π)` acting as the shift `t ↦ t - (t_σ/π)τ`.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

mod cache;

pub use cache::OrbitCache;

use params_core::{f, DerivedConstants, ParamError, Params, F0};
use radial_integrator::ode::{solve, DenseOutput, EventFn, OdeError, OdeOptions, Tolerance};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("sigma = {sigma} outside (0, {sigma_bar}]")]
    SigmaRange { sigma: f64, sigma_bar: f64 },
    #[error("sigma = {sigma} within the margin of sigma_bar = {sigma_bar}; use the near-maximum path")]
    NearMaximum { sigma: f64, sigma_bar: f64 },
    #[error("period quadrature did not converge (last change {0:e})")]
    Quadrature(f64),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Orbit identity: energy and phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    pub sigma: f64,
    pub tau_angle: f64,
}

impl OrbitSpec {
    /// Validates `σ` against `σ̄` and normalises the angle to `[0, 2π)`.
    pub fn new(p: &Params, sigma: f64, tau_angle: f64) -> Result<Self, OrbitError> {
        let sb = sigma_bar(p);
        if !(sigma > 0.0 && sigma <= sb) {
            return Err(OrbitError::SigmaRange { sigma, sigma_bar: sb });
        }
        Ok(OrbitSpec { sigma, tau_angle: tau_angle.rem_euclid(2.0 * PI) })
    }
}

/// Default relative margin below `σ̄` for σ-derivatives.
pub const SIGMA_BAR_MARGIN: f64 = 1e-4;

pub fn sigma_bar(p: &Params) -> f64 {
    let m0 = m0(p);
    F0(p, m0)
}

pub fn m0(p: &Params) -> f64 {
    ((p.nf() - 2.0) / 2.0).powf((p.nf() - 2.0) / (2.0 - p.s))
}

fn lambda0(p: &Params) -> f64 {
    ((p.nf() - 2.0) * (p.nf() - p.s) / 4.0).powf(1.0 / (p.two_star_s() - 2.0))
}

/// Root of `F0 = σ` on a bracket where `F0 - σ` changes sign.
fn bracket_root(p: &Params, sigma: f64, mut lo: f64, mut hi: f64) -> f64 {
    let sb = sigma_bar(p);
    let g = |x: f64| {
        if sigma > 0.9 * sb {
            (sb - sigma) + excess_from_top(p, x)
        } else {
            F0(p, x) - sigma
        }
    };
    let mut glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let gm = g(mid);
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = 2.0 * f(p, x);
        if d != 0.0 {
            let nx = x - g(x) / d;
            if nx > lo.min(hi) && nx < lo.max(hi) {
                x = nx;
            }
        }
    }
    x
}

/// The two positive solutions `a_σ ≤ M0 ≤ b_σ` of `F0(ξ) = σ`.
pub fn level_roots(p: &Params, sigma: f64) -> Result<(f64, f64), OrbitError> {
    let sb = sigma_bar(p);
    let m = m0(p);
    if sigma == sb {
        return Ok((m, m));
    }
    if !(sigma > 0.0 && sigma < sb) {
        return Err(OrbitError::SigmaRange { sigma, sigma_bar: sb });
    }
    let a = bracket_root(p, sigma, 0.0, m);
    let b = bracket_root(p, sigma, m, lambda0(p));
    Ok((a, b))
}

const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_3),
];

/// `F0(η) - σ̄` as `2∫_{M0}^{η} f`, accurate when η is close to `M0`.
fn excess_from_top(p: &Params, eta: f64) -> f64 {
    let m = m0(p);
    let half = 0.5 * (eta - m);
    let mid = 0.5 * (eta + m);
    let sum: f64 = GL8.iter().map(|&(x, w)| w * (f(p, mid - half * x) + f(p, mid + half * x))).sum();
    2.0 * half * sum
}

/// Half period `t_σ = ∫_a^b dη / sqrt(F0(η) - σ)`.
///
/// With `η = a + (b-a) sin²θ` the integrand becomes `2/sqrt(G)`,
/// `G = (F0(η) - σ)/((η-a)(b-η))`, smooth and even in θ, so the trapezoid
/// rule converges spectrally.
pub fn half_period(p: &Params, sigma: f64) -> Result<f64, OrbitError> {
    let sb = sigma_bar(p);
    if !(sigma > 0.0 && sigma < sb) {
        return Err(OrbitError::SigmaRange { sigma, sigma_bar: sb });
    }
    let (a, b) = level_roots(p, sigma)?;
    let w = b - a;
    let near_top = sigma > 0.9 * sb;
    let g = |th: f64| -> f64 {
        if th <= 0.0 {
            return 2.0 * f(p, a) / w;
        }
        if th >= PI / 2.0 {
            return -2.0 * f(p, b) / w;
        }
        let s2 = th.sin().powi(2);
        let eta = a + w * s2;
        let prod = w * w * s2 * th.cos().powi(2);
        let lift = if near_top { (sb - sigma) + excess_from_top(p, eta) } else { F0(p, eta) - sigma };
        lift / prod
    };
    let integrand = |th: f64| 2.0 / g(th).sqrt();
    let mut prev = f64::NAN;
    let mut n = 8usize;
    while n <= 1 << 16 {
        let h = (PI / 2.0) / n as f64;
        let mut sum = 0.5 * (integrand(0.0) + integrand(PI / 2.0));
        for j in 1..n {
            sum += integrand(j as f64 * h);
        }
        let val = sum * h;
        let change = (val - prev).abs();
        // near σ̄ the cancellation in F0(η) - σ sets a noise floor
        if change <= 1e-14 * val || (n >= 1024 && change <= 1e-10 * val) {
            return Ok(val);
        }
        prev = val;
        n *= 2;
    }
    Err(OrbitError::Quadrature(prev))
}

/// Period measured by integrating `φ'' = f(φ)` from the minimum and locating
/// the second zero of `φ'`.
pub fn measured_period(p: &Params, sigma: f64) -> Result<f64, OrbitError> {
    let (a, _) = level_roots(p, sigma)?;
    let t_guess = 2.0 * half_period(p, sigma)?;
    let pp = *p;
    let ev = [EventFn { g: Box::new(|_, y: &[f64; 2]| y[1]), terminal: false }];
    let opts = OdeOptions { tol: Tolerance { rtol: 1e-13, atol: 1e-15 }, ..Default::default() };
    let sol = solve(move |_, y: &[f64; 2]| [y[1], f(&pp, y[0])], 0.0, [a, 0.0], 1.5 * t_guess, &opts, &ev)?;
    sol.events
        .get(1)
        .map(|e| e.t)
        .ok_or(OrbitError::Quadrature(f64::NAN))
}

/// One sample of an orbit and its σ-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSample {
    pub t: f64,
    pub phi: f64,
    pub dphi: f64,
    pub dphi_dsigma: f64,
    pub ddphi_dsigma: f64,
}

/// One period of the unshifted orbit `φ_σ` with `φ_σ(0) = a_σ`.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub sigma: f64,
    pub a_sigma: f64,
    pub b_sigma: f64,
    pub t_sigma: f64,
    /// `d(2t_σ)/dσ`; `None` at `σ̄`.
    pub period_derivative: Option<f64>,
    pub samples: Vec<OrbitSample>,
    params: Params,
    dense: Option<DenseOutput<4>>,
}

impl OrbitData {
    /// Integrates `(φ, φ', ∂σφ, ∂σφ')` over one period.
    pub fn build(p: &Params, sigma: f64) -> Result<Self, OrbitError> {
        let sb = sigma_bar(p);
        if sigma == sb {
            let m = m0(p);
            let k = (-params_core::f_prime(p, m)).sqrt();
            return Ok(OrbitData {
                sigma,
                a_sigma: m,
                b_sigma: m,
                t_sigma: PI / k,
                period_derivative: None,
                samples: vec![OrbitSample { t: 0.0, phi: m, dphi: 0.0, dphi_dsigma: f64::NAN, ddphi_dsigma: f64::NAN }],
                params: *p,
                dense: None,
            });
        }
        let (a, b) = level_roots(p, sigma)?;
        let ts = half_period(p, sigma)?;
        let period = 2.0 * ts;
        let pp = *p;
        let fa = f(p, a);
        let opts = OdeOptions { tol: Tolerance { rtol: 1e-13, atol: 1e-15 }, ..Default::default() };
        let sol = solve(
            move |_, y: &[f64; 4]| [y[1], f(&pp, y[0]), y[3], params_core::f_prime(&pp, y[0]) * y[2]],
            0.0,
            [a, 0.0, 1.0 / (2.0 * fa), 0.0],
            period,
            &opts,
            &[],
        )?;
        let end = *sol.y.last().unwrap();
        let samples = sol
            .t
            .iter()
            .zip(&sol.y)
            .map(|(t, y)| OrbitSample { t: *t, phi: y[0], dphi: y[1], dphi_dsigma: y[2], ddphi_dsigma: y[3] })
            .collect();
        Ok(OrbitData {
            sigma,
            a_sigma: a,
            b_sigma: b,
            t_sigma: ts,
            period_derivative: Some(-end[3] / fa),
            samples,
            params: *p,
            dense: Some(sol.dense),
        })
    }

    pub fn period(&self) -> f64 {
        2.0 * self.t_sigma
    }

    pub fn is_constant(&self) -> bool {
        self.dense.is_none()
    }

    /// Unshifted `(φ, φ', ∂σφ, ∂σφ')` at any time, with `∂σφ` continued
    /// beyond the first period by differentiating `φ_σ(t + P(σ)) = φ_σ(t)`.
    pub fn eval_unshifted(&self, t: f64) -> [f64; 4] {
        let Some(d) = &self.dense else {
            return [self.a_sigma, 0.0, f64::NAN, f64::NAN];
        };
        let per = self.period();
        let m = (t / per).floor();
        let s0 = (t - m * per).clamp(0.0, per);
        let y = d.eval(s0).expect("inside one period");
        let dp = self.period_derivative.unwrap_or(0.0);
        [y[0], y[1], y[2] - m * dp * y[1], y[3] - m * dp * f(&self.params, y[0])]
    }

    /// `(φ, φ')` of the shifted orbit `φ_σ(t - (t_σ/π)τ)`.
    pub fn eval(&self, t: f64, tau_angle: f64) -> (f64, f64) {
        let y = self.eval_unshifted(t - self.t_sigma / PI * tau_angle);
        (y[0], y[1])
    }

    /// `(∂σφ, ∂σφ')` of the shifted orbit at fixed `(t, τ)`, including the
    /// contribution of the σ-dependent shift.
    pub fn sigma_derivative(&self, t: f64, tau_angle: f64) -> Result<(f64, f64), OrbitError> {
        let Some(dp) = self.period_derivative else {
            return Err(OrbitError::NearMaximum { sigma: self.sigma, sigma_bar: self.sigma });
        };
        let y = self.eval_unshifted(t - self.t_sigma / PI * tau_angle);
        let c = tau_angle / PI * 0.5 * dp;
        Ok((y[2] - c * y[1], y[3] - c * f(&self.params, y[0])))
    }

    /// `(∂τφ, ∂τφ')` of the shifted orbit.
    pub fn tau_derivative(&self, t: f64, tau_angle: f64) -> (f64, f64) {
        let y = self.eval_unshifted(t - self.t_sigma / PI * tau_angle);
        let c = -self.t_sigma / PI;
        (c * y[1], c * f(&self.params, y[0]))
    }
}

/// `(φ, φ')` of the orbit `(σ, τ)` at time `t`.
pub fn orbit_eval(p: &Params, spec: &OrbitSpec, t: f64) -> Result<(f64, f64), OrbitError> {
    let data = OrbitData::build(p, spec.sigma)?;
    Ok(data.eval(t, spec.tau_angle))
}

/// `(∂σφ, ∂σφ')` at time `t`; rejects `σ` within `SIGMA_BAR_MARGIN·σ̄` of `σ̄`.
pub fn orbit_sigma_derivative(p: &Params, spec: &OrbitSpec, t: f64) -> Result<(f64, f64), OrbitError> {
    let sb = sigma_bar(p);
    if spec.sigma > sb * (1.0 - SIGMA_BAR_MARGIN) {
        return Err(OrbitError::NearMaximum { sigma: spec.sigma, sigma_bar: sb });
    }
    OrbitData::build(p, spec.sigma)?.sigma_derivative(t, spec.tau_angle)
}

/// Limit of `2t_σ` as `σ → σ̄`: `2π/sqrt(-f'(M0))`.
pub fn limiting_period(p: &Params) -> f64 {
    2.0 * PI / (-params_core::f_prime(p, m0(p))).sqrt()
}

/// Consistency check of the cached constant against `DerivedConstants`.
pub fn sigma_bar_matches(p: &Params, dc: &DerivedConstants) -> bool {
    (sigma_bar(p) - dc.sigma_bar).abs() <= 1e-12 * dc.sigma_bar.abs().max(1.0)
}
