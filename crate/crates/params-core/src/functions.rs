#![allow(non_snake_case)]

use crate::{pw, ParamError, Params};

/// `f(ξ) = (n-2)²ξ/4 - ξ^{2*(s)-1}`.
pub fn f(p: &Params, xi: f64) -> f64 {
    let k = p.k();
    k * k * xi - pw(xi, p.two_star_s() - 1.0)
}

pub fn f_prime(p: &Params, xi: f64) -> f64 {
    let k = p.k();
    let ts = p.two_star_s();
    k * k - (ts - 1.0) * pw(xi, ts - 2.0)
}

/// `F0(ξ) = (n-2)²ξ²/4 - (2/2*(s)) ξ^{2*(s)}`, so that `F0' = 2f`.
pub fn F0(p: &Params, xi: f64) -> f64 {
    let k = p.k();
    let ts = p.two_star_s();
    k * k * xi * xi - 2.0 / ts * pw(xi, ts)
}

pub fn F0_prime(p: &Params, xi: f64) -> f64 {
    2.0 * f(p, xi)
}

/// `F_R(ξ) = (n-2)²/4 - (2/2*(s)) ξ^{2*(s)-2} + 2μR^λ ξ^{q-1}/(q+1)`.
///
/// Not multiplied by `ξ²`: `ξ² F_R(ξ) = F0(ξ) + 2μR^λ ξ^{q+1}/(q+1)`.
pub fn FR(p: &Params, r: f64, xi: f64) -> f64 {
    let k = p.k();
    let ts = p.two_star_s();
    k * k - 2.0 / ts * pw(xi, ts - 2.0) + 2.0 * p.mu * pw(r, p.lambda()) * pw(xi, p.q - 1.0) / (p.q + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    F,
    F0,
    FR(f64),
}

pub fn potential_eval(p: &Params, which: Potential, xi: f64) -> Result<f64, ParamError> {
    if !(xi >= 0.0) {
        return Err(ParamError::NegativeArgument(xi));
    }
    Ok(match which {
        Potential::F => f(p, xi),
        Potential::F0 => F0(p, xi),
        Potential::FR(r) => {
            if !(r > 0.0) {
                return Err(ParamError::Radius(r));
            }
            FR(p, r, xi)
        }
    })
}

/// Bubble `U_η(r) = c_ns η^{(n-2)/2} (η^{2-s} + r^{2-s})^{-(n-2)/(2-s)}`.
pub fn bubble_eval(p: &Params, eta: f64, r: f64) -> f64 {
    let n = p.nf();
    let c = pw((n - p.s) * (n - 2.0), 1.0 / (p.two_star_s() - 2.0));
    let e = 2.0 - p.s;
    c * pw(eta, p.k()) * pw(pw(eta, e) + pw(r, e), -(n - 2.0) / e)
}

/// Radial derivative of the bubble.
pub fn bubble_deriv(p: &Params, eta: f64, r: f64) -> f64 {
    let e = 2.0 - p.s;
    let u = bubble_eval(p, eta, r);
    -(p.nf() - 2.0) * u * pw(r, 1.0 - p.s) / (pw(eta, e) + pw(r, e))
}

/// Peak value of `r^{(n-2)/2} U_η(r)`, attained at `r = η`.
pub fn bubble_peak_z(p: &Params) -> f64 {
    let n = p.nf();
    let c = pw((n - p.s) * (n - 2.0), 1.0 / (p.two_star_s() - 2.0));
    c * pw(2.0, -(n - 2.0) / (2.0 - p.s))
}
