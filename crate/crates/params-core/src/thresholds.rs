use crate::{pw, DerivedConstants, ParamError, Params, F0, FR};

/// `R*` is infinite below the Hardy–Sobolev critical power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RStar {
    Finite(f64),
    Infinite,
}

impl RStar {
    pub fn value(&self) -> f64 {
        match self {
            RStar::Finite(v) => *v,
            RStar::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusThresholds {
    pub r_lambda: f64,
    pub r_star: RStar,
    pub xi_c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllSup {
    pub value: f64,
    pub maximizer: f64,
}

fn require_ell_range(p: &Params) -> Result<(), ParamError> {
    let lo = p.two_star_s() - 1.0;
    let hi = p.two_star() - 1.0;
    if p.q > lo && p.q < hi {
        Ok(())
    } else {
        Err(ParamError::QOutOfRange { q: p.q, lo, hi })
    }
}

/// `R_Λ = [-(q+1)F0(Λ)/(2μΛ^{q+1})]^{1/λ}`, the radius where `F_R(Λ) = 0`.
pub fn r_lambda(p: &Params, lambda_cap: f64) -> Result<f64, ParamError> {
    let dc = DerivedConstants::derive(p)?;
    if !(lambda_cap > dc.lambda0) {
        return Err(ParamError::LambdaTooSmall { lambda: lambda_cap, lambda0: dc.lambda0 });
    }
    if !(p.mu > 0.0) {
        return Err(ParamError::MuNotPositive);
    }
    let lam = p.lambda();
    if !(lam > 0.0) {
        return Err(ParamError::QOutOfRange { q: p.q, lo: 1.0, hi: p.two_star() - 1.0 });
    }
    let base = -(p.q + 1.0) * F0(p, lambda_cap) / (2.0 * p.mu * pw(lambda_cap, p.q + 1.0));
    Ok(pw(base, 1.0 / lam))
}

pub fn ell_q_closed(p: &Params) -> Result<f64, ParamError> {
    require_ell_range(p)?;
    let n = p.nf();
    let s = p.s;
    let kq = p.kq();
    let pre = (2.0 - s) * (p.q + 1.0) / ((n - s) * (p.q - 1.0));
    let br = (n - 2.0) * (n - s) * (p.q - 1.0) / (4.0 * kq);
    Ok(pre * pw(br, -kq / (p.two_star_s() - 2.0)))
}

/// Maximiser of `-F0(Λ)/Λ^{q+1}` in closed form.
pub fn lambda_star(p: &Params) -> Result<f64, ParamError> {
    require_ell_range(p)?;
    let n = p.nf();
    let br = (n - 2.0) * (n - p.s) * (p.q - 1.0) / (4.0 * p.kq());
    Ok(pw(br, 1.0 / (p.two_star_s() - 2.0)))
}

/// `ℓ_q` as `(q+1)/2 · sup_{Λ>Λ0} -F0(Λ)/Λ^{q+1}`, by grid scan and golden-section refinement.
pub fn ell_q_sup(p: &Params, grid: usize) -> Result<EllSup, ParamError> {
    require_ell_range(p)?;
    let dc = DerivedConstants::derive(p)?;
    let g = |x: f64| -F0(p, x) / pw(x, p.q + 1.0);
    let grid = grid.max(8);
    let lo = dc.lambda0;
    let mut hi = 4.0 * lo;
    let mut best = None;
    for _ in 0..60 {
        let (mut bi, mut bv) = (0usize, f64::NEG_INFINITY);
        for i in 0..=grid {
            let x = lo * pw(hi / lo, i as f64 / grid as f64);
            let v = g(x);
            if v > bv {
                bv = v;
                bi = i;
            }
        }
        if bi < grid && bi > 0 {
            let at = |i: usize| lo * pw(hi / lo, i as f64 / grid as f64);
            best = Some((at(bi - 1), at(bi + 1)));
            break;
        }
        if bi == 0 {
            return Err(ParamError::NoMaximum(format!("maximum at lower end of [{lo}, {hi}]")));
        }
        hi *= 2.0;
    }
    let (mut a, mut b) =
        best.ok_or_else(|| ParamError::NoMaximum("bracket expansion did not terminate".into()))?;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * b.abs() {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        }
    }
    let m = 0.5 * (a + b);
    Ok(EllSup { value: (p.q + 1.0) / 2.0 * g(m), maximizer: m })
}

pub fn r_star(p: &Params) -> Result<RStar, ParamError> {
    let crit = p.two_star_s() - 1.0;
    if p.q < crit {
        return Ok(RStar::Infinite);
    }
    if !(p.mu > 0.0) {
        return Err(ParamError::MuNotPositive);
    }
    if p.q == crit {
        return Ok(RStar::Finite(pw(1.0 / p.mu, 1.0 / p.s)));
    }
    let ell = ell_q_closed(p)?;
    Ok(RStar::Finite(pw(ell / p.mu, 1.0 / p.lambda())))
}

/// Unique positive critical point of `F_R̄`, a global minimum.
pub fn xi_c(p: &Params, rbar: f64) -> Result<f64, ParamError> {
    if !(rbar > 0.0) {
        return Err(ParamError::Radius(rbar));
    }
    if !(p.mu > 0.0) {
        return Err(ParamError::MuNotPositive);
    }
    let kq = p.kq();
    if !(kq > 0.0) {
        return Err(ParamError::QOutOfRange { q: p.q, lo: p.two_star_s() - 1.0, hi: f64::INFINITY });
    }
    let n = p.nf();
    let base = (2.0 - p.s) * (p.q + 1.0) / (p.mu * (n - p.s) * (p.q - 1.0) * pw(rbar, p.lambda()));
    Ok(pw(base, 1.0 / kq))
}

/// `R_Λ`, `R*`, and `ξ_c(R̄)` when `R̄` is given and meaningful.
pub fn radius_thresholds(
    p: &Params,
    lambda_cap: f64,
    rbar: Option<f64>,
) -> Result<RadiusThresholds, ParamError> {
    let r_l = r_lambda(p, lambda_cap)?;
    let resid = FR(p, r_l, lambda_cap);
    debug_assert!(resid.abs() < 1e-9, "F_R(Λ) residual {resid}");
    let xi = match rbar {
        Some(rb) if p.kq() > 0.0 => Some(xi_c(p, rb)?),
        _ => None,
    };
    Ok(RadiusThresholds { r_lambda: r_l, r_star: r_star(p)?, xi_c: xi })
}
