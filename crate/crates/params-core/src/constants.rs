use crate::{pw, ParamError, Params, F0};
use std::f64::consts::PI;

/// Closed-form constants attached to a parameter set.
///
/// Quantities that involve `q - 2*(s) + 1` in a denominator, or that are
/// otherwise singular at the given `q`, are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub two_star_s: f64,
    pub two_star: f64,
    pub c_ns: f64,
    pub lambda: f64,
    pub c_mu_q_n: f64,
    pub vartheta: Option<f64>,
    pub beta: Option<f64>,
    pub zeta: Option<f64>,
    pub upsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda0: f64,
    pub m0: f64,
    pub sigma_bar: f64,
    pub theta: Option<f64>,
    pub omega_n_minus_1: f64,
    pub a_xi: f64,
    pub nd_admissible: bool,
    pub mb_admissible: bool,
}

impl DerivedConstants {
    pub fn derive(p: &Params) -> Result<Self, ParamError> {
        p.validate()?;
        let n = p.nf();
        let s = p.s;
        let ts = p.two_star_s();
        let t = p.two_star();
        let kq = p.kq();
        let c_ns = pw((n - s) * (n - 2.0), 1.0 / (ts - 2.0));
        let lambda = p.lambda();
        let lambda0 = pw((n - 2.0) * (n - s) / 4.0, 1.0 / (ts - 2.0));
        let m0 = pw((n - 2.0) / 2.0, (n - 2.0) / (2.0 - s));

        let (vartheta, beta, zeta, upsilon, gamma, lambda1) = if kq > 0.0 {
            let vt = s / kq;
            let be = (p.q - 1.0) * vt / 2.0 - 1.0;
            let ze = (ts - 2.0) / kq;
            let up = Some(pw(p.mu, ze / 2.0) * kq.sqrt());
            let ga = vt * (n - 2.0 - vt) * pw(p.mu, ze);
            let l1 = if be != 0.0 && p.mu > 0.0 {
                Some(pw(p.mu, -ze / 2.0) * kq.sqrt() / be)
            } else {
                None
            };
            (Some(vt), Some(be), Some(ze), up, Some(ga), l1)
        } else {
            (None, None, None, None, None, None)
        };

        let theta_den = t - 1.0 - p.q;
        let theta = if theta_den != 0.0 { Some(2.0 * (p.q - t + 2.0) / theta_den) } else { None };

        Ok(DerivedConstants {
            two_star_s: ts,
            two_star: t,
            c_ns,
            lambda,
            c_mu_q_n: p.c_mu(),
            vartheta,
            beta,
            zeta,
            upsilon,
            gamma,
            lambda1,
            lambda0,
            m0,
            sigma_bar: F0(p, m0),
            theta,
            omega_n_minus_1: sphere_area(p.n),
            a_xi: (2.0 * n - s - 2.0) / (2.0 - s),
            nd_admissible: p.nd_admissible(),
            mb_admissible: p.mb_admissible(),
        })
    }

    /// Named entries in a fixed order; `None` marks an undefined value.
    pub fn entries(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("two_star_s", Some(self.two_star_s)),
            ("two_star", Some(self.two_star)),
            ("c_ns", Some(self.c_ns)),
            ("lambda", Some(self.lambda)),
            ("c_mu_q_n", Some(self.c_mu_q_n)),
            ("vartheta", self.vartheta),
            ("beta", self.beta),
            ("zeta", self.zeta),
            ("Upsilon", self.upsilon),
            ("Gamma", self.gamma),
            ("lambda1", self.lambda1),
            ("Lambda0", Some(self.lambda0)),
            ("M0", Some(self.m0)),
            ("sigma_bar", Some(self.sigma_bar)),
            ("Theta", self.theta),
            ("omega_n_minus_1", Some(self.omega_n_minus_1)),
            ("a_xi", Some(self.a_xi)),
        ]
    }
}

/// Area of the unit sphere `S^{n-1} ⊂ R^n`, `2π^{n/2}/Γ(n/2)`.
pub fn sphere_area(n: u32) -> f64 {
    // ω_{m} = 2π/(m-1) ω_{m-2}, starting from S^0 and S^1
    let m = n as i64 - 1;
    let (mut area, mut dim) = if m % 2 == 0 { (2.0, 0i64) } else { (2.0 * PI, 1i64) };
    while dim < m {
        dim += 2;
        area *= 2.0 * PI / (dim - 1) as f64;
    }
    area
}
