//! The autonomous system for `X = (t(1 - μr^s u^{kq}), 1/t, ru'/u + ϑ)`,
//! `t = r^{-β}`, and its diagonal form.

use crate::NdError;
use params_core::{DerivedConstants, Params};

/// Constants of the system, available only in the admissible range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdConstants {
    pub vartheta: f64,
    pub beta: f64,
    pub zeta: f64,
    pub upsilon: f64,
    pub gamma: f64,
    pub lambda1: f64,
    /// `q - 2*(s) + 1`.
    pub kq: f64,
}

impl NdConstants {
    pub fn new(p: &Params) -> Result<Self, NdError> {
        let dc = DerivedConstants::derive(p)?;
        if !p.nd_admissible() {
            return Err(NdError::NotAdmissible { q: p.q });
        }
        let need = |v: Option<f64>, name: &'static str| v.ok_or(NdError::Undefined(name));
        let c = NdConstants {
            vartheta: need(dc.vartheta, "vartheta")?,
            beta: need(dc.beta, "beta")?,
            zeta: need(dc.zeta, "zeta")?,
            upsilon: need(dc.upsilon, "Upsilon")?,
            gamma: need(dc.gamma, "Gamma")?,
            lambda1: need(dc.lambda1, "lambda1")?,
            kq: p.kq(),
        };
        if c.upsilon == 0.0 {
            return Err(NdError::Undefined("Upsilon"));
        }
        Ok(c)
    }
}

/// Which third component is used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum H3Variant {
    /// `(1 - ξ1ξ2)_+^ζ`.
    Raw,
    /// `Ψ_ε(1 - ξ1ξ2)`.
    Regularized { epsilon: f64 },
}

/// `Ψ_ε(t) = t^ζ` for `t ≥ ε`, continued below `ε` by its tangent line.
pub fn psi_eps(zeta: f64, epsilon: f64, t: f64) -> f64 {
    if t >= epsilon {
        t.powf(zeta)
    } else {
        epsilon.powf(zeta) + zeta * epsilon.powf(zeta - 1.0) * (t - epsilon)
    }
}

/// `H(ξ)`.
pub fn nd_rhs(p: &Params, c: &NdConstants, variant: H3Variant, xi: [f64; 3]) -> [f64; 3] {
    let [x1, x2, x3] = xi;
    let one = 1.0 - x1 * x2;
    let h1 = x1 * x2 + c.kq / c.beta * one * x3;
    let h2 = -x2 * x2;
    let pow = match variant {
        H3Variant::Raw => one.max(0.0).powf(c.zeta),
        H3Variant::Regularized { epsilon } => psi_eps(c.zeta, epsilon, one),
    };
    let h3 = p.mu.powf(-c.zeta) / c.beta * x1 * pow
        + x2 * (x3 - c.vartheta) * (x3 - c.vartheta + p.nf() - 2.0) / c.beta;
    [h1, h2, h3]
}

/// `DH(0)`.
pub fn jacobian_at_origin(p: &Params, c: &NdConstants) -> [[f64; 3]; 3] {
    [
        [0.0, 0.0, c.kq / c.beta],
        [0.0, 0.0, 0.0],
        [p.mu.powf(-c.zeta) / c.beta, -c.vartheta * (p.nf() - 2.0 - c.vartheta) / c.beta, 0.0],
    ]
}

/// Central-difference Jacobian of `H` at `xi`.
pub fn numeric_jacobian(p: &Params, c: &NdConstants, variant: H3Variant, xi: [f64; 3], h: f64) -> [[f64; 3]; 3] {
    let mut j = [[0.0; 3]; 3];
    for col in 0..3 {
        let mut a = xi;
        let mut b = xi;
        a[col] += h;
        b[col] -= h;
        let fa = nd_rhs(p, c, variant, a);
        let fb = nd_rhs(p, c, variant, b);
        for row in 0..3 {
            j[row][col] = (fa[row] - fb[row]) / (2.0 * h);
        }
    }
    j
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToDiagonal,
    FromDiagonal,
}

/// `Y = (Υ(Z1 - Z3) + ΓZ2, Z2, Z1 + Z3)` and its inverse.
pub fn diagonal_change(c: &NdConstants, direction: Direction, v: [f64; 3]) -> [f64; 3] {
    let (u, g) = (c.upsilon, c.gamma);
    match direction {
        Direction::FromDiagonal => [u * (v[0] - v[2]) + g * v[1], v[1], v[0] + v[2]],
        Direction::ToDiagonal => [
            (v[0] - g * v[1] + u * v[2]) / (2.0 * u),
            v[1],
            (g * v[1] + u * v[2] - v[0]) / (2.0 * u),
        ],
    }
}

/// Vector field in diagonal coordinates, `M^{-1} H(M Z)`.
pub fn diagonal_rhs(p: &Params, c: &NdConstants, variant: H3Variant, z: [f64; 3]) -> [f64; 3] {
    let y = diagonal_change(c, Direction::FromDiagonal, z);
    let hy = nd_rhs(p, c, variant, y);
    diagonal_change(c, Direction::ToDiagonal, hy)
}

/// Nonlinear remainder `h = M^{-1}H(MZ) - diag(λ1, 0, -λ1) Z`.
pub fn h_functions(p: &Params, c: &NdConstants, variant: H3Variant, z: [f64; 3]) -> [f64; 3] {
    let d = diagonal_rhs(p, c, variant, z);
    [d[0] - c.lambda1 * z[0], d[1], d[2] + c.lambda1 * z[2]]
}

/// `M^{-1} J M` with the analytic Jacobian.
pub fn conjugated_jacobian(j: &[[f64; 3]; 3], c: &NdConstants) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for col in 0..3 {
        let mut e = [0.0; 3];
        e[col] = 1.0;
        let me = diagonal_change(c, Direction::FromDiagonal, e);
        let jme: [f64; 3] = std::array::from_fn(|r| (0..3).map(|k| j[r][k] * me[k]).sum());
        let back = diagonal_change(c, Direction::ToDiagonal, jme);
        for row in 0..3 {
            out[row][col] = back[row];
        }
    }
    out
}

/// Eigenpairs `(λ1, (Υ,0,1))`, `(0, (Γ,1,0))`, `(-λ1, (-Υ,0,1))`.
pub fn eigenpairs(c: &NdConstants) -> [(f64, [f64; 3]); 3] {
    [
        (c.lambda1, [c.upsilon, 0.0, 1.0]),
        (0.0, [c.gamma, 1.0, 0.0]),
        (-c.lambda1, [-c.upsilon, 0.0, 1.0]),
    ]
}

/// `max_i |(J v - λ v)_i|` for each eigenpair.
pub fn eigen_residuals(j: &[[f64; 3]; 3], c: &NdConstants) -> [f64; 3] {
    eigenpairs(c).map(|(lam, v)| {
        (0..3)
            .map(|r| ((0..3).map(|k| j[r][k] * v[k]).sum::<f64>() - lam * v[r]).abs())
            .fold(0.0, f64::max)
    })
}
