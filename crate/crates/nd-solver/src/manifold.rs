//! Center-stable manifold `Z1 = w(Z2, Z3)` as the fixed point of
//! `Tw(y0, z0) = -∫_0^∞ e^{-at} h1(w(Φ_t), Φ_t) dt`.

use crate::radius::{choose_radius, estimate_c1, RadiusChoice};
use crate::system::{h_functions, H3Variant, NdConstants};
use crate::NdError;
use cgs_solver::{picard_iterate, PicardError};
use params_core::Params;
use radial_integrator::ode::{solve, DenseOutput, OdeOptions, Stop, Tolerance};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct NdConfig {
    /// Threshold below which `Ψ_ε` departs from `t^ζ`.
    pub epsilon: f64,
    /// Radius of the ball on which `C1` is sampled.
    pub delta: f64,
    /// Lipschitz budget of the manifold graph.
    pub c2: f64,
    /// Fixed `C1`; `None` samples it.
    pub c1: Option<f64>,
    pub c1_safety: f64,
    /// Fixed `r0`; `None` uses `choose_radius`.
    pub r0: Option<f64>,
    /// Nodes in `y ∈ [0, r0]`.
    pub ny: usize,
    /// Nodes in `z ∈ [-r0, r0]`.
    pub nz: usize,
    /// Picard stopping tolerance in the sup norm.
    pub tol: f64,
    pub max_iter: usize,
    pub ode_tol: Tolerance,
}

impl Default for NdConfig {
    fn default() -> Self {
        NdConfig {
            epsilon: 0.5,
            delta: 0.1,
            c2: 1.0,
            c1: None,
            c1_safety: 1.5,
            r0: None,
            ny: 33,
            nz: 65,
            tol: 1e-14,
            max_iter: 60,
            ode_tol: Tolerance { rtol: 1e-12, atol: 1e-18 },
        }
    }
}

impl NdConfig {
    pub fn variant(&self) -> H3Variant {
        H3Variant::Regularized { epsilon: self.epsilon }
    }
}

/// Converged manifold on the node lattice of `[0, r0] × [-r0, r0]`.
#[derive(Debug, Clone)]
pub struct ManifoldGrid {
    pub params: Params,
    pub constants: NdConstants,
    pub r0: f64,
    pub ny: usize,
    pub nz: usize,
    /// Row-major in `y`: index `i·nz + j`.
    pub values: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
    pub radius: RadiusChoice,
    /// Truncation time of the T-map integral.
    pub t_tail: f64,
    pub ratios: Vec<f64>,
    pub deltas: Vec<f64>,
    pub final_delta: f64,
    /// Largest neighbouring-node difference quotient seen over all sweeps.
    pub lipschitz_estimate: f64,
    pub epsilon: f64,
}

/// Bilinear interpolation on the lattice, clamped to the domain.
fn bilinear(values: &[f64], ny: usize, nz: usize, r0: f64, y: f64, z: f64) -> f64 {
    let hy = r0 / (ny - 1) as f64;
    let hz = 2.0 * r0 / (nz - 1) as f64;
    let fy = (y.clamp(0.0, r0) / hy).min((ny - 1) as f64);
    let fz = ((z.clamp(-r0, r0) + r0) / hz).min((nz - 1) as f64);
    let i = (fy.floor() as usize).min(ny - 2);
    let j = (fz.floor() as usize).min(nz - 2);
    let (ty, tz) = (fy - i as f64, fz - j as f64);
    let v = |a: usize, b: usize| values[a * nz + b];
    (1.0 - ty) * ((1.0 - tz) * v(i, j) + tz * v(i, j + 1)) + ty * ((1.0 - tz) * v(i + 1, j) + tz * v(i + 1, j + 1))
}

fn lipschitz(values: &[f64], ny: usize, nz: usize, r0: f64) -> f64 {
    let hy = r0 / (ny - 1) as f64;
    let hz = 2.0 * r0 / (nz - 1) as f64;
    let hd = (hy * hy + hz * hz).sqrt();
    let mut best: f64 = 0.0;
    for i in 0..ny {
        for j in 0..nz {
            let v = values[i * nz + j];
            if i + 1 < ny {
                best = best.max((values[(i + 1) * nz + j] - v).abs() / hy);
            }
            if j + 1 < nz {
                best = best.max((values[i * nz + j + 1] - v).abs() / hz);
            }
            if i + 1 < ny && j + 1 < nz {
                best = best.max((values[(i + 1) * nz + j + 1] - v).abs() / hd);
            }
        }
    }
    best
}

/// Shared pieces of the reduced flow `(S_w)`.
pub(crate) struct Flow<'a> {
    pub p: &'a Params,
    pub c: &'a NdConstants,
    pub variant: H3Variant,
    pub values: &'a [f64],
    pub ny: usize,
    pub nz: usize,
    pub r0: f64,
    pub tol: Tolerance,
}

impl Flow<'_> {
    pub fn w(&self, y: f64, z: f64) -> f64 {
        bilinear(self.values, self.ny, self.nz, self.r0, y, z)
    }

    /// Integrates `(y, z, ∫e^{-at}h1)` on `[0, t_end]`.
    pub fn run(&self, y0: f64, z0: f64, t_end: f64) -> Result<(DenseOutput<3>, Vec<[f64; 3]>), NdError> {
        let a = self.c.lambda1;
        let rhs = |t: f64, s: &[f64; 3]| {
            let x = self.w(s[0], s[1]);
            let h = h_functions(self.p, self.c, self.variant, [x, s[0], s[1]]);
            [h[1], -a * s[1] + h[2], (-a * t).exp() * h[0]]
        };
        let opts = OdeOptions { tol: self.tol, ..Default::default() };
        let sol = solve(rhs, 0.0, [y0, z0, 0.0], t_end, &opts, &[]).map_err(|e| NdError::Integration(e.to_string()))?;
        if sol.stop != Stop::Completed {
            return Err(NdError::Integration(format!("flow stopped at t = {}", sol.t_stop)));
        }
        let lim = self.r0 * (1.0 + 1e-9);
        if let Some(bad) = sol.y.iter().find(|s| s[0].abs() > lim || s[1].abs() > lim) {
            return Err(NdError::FlowEscape { y: bad[0], z: bad[1], r0: self.r0 });
        }
        Ok((sol.dense, sol.y))
    }

    /// `Tw(y0, z0)` truncated at `t_tail`.
    pub fn t_map(&self, y0: f64, z0: f64, t_tail: f64) -> Result<f64, NdError> {
        if y0 == 0.0 && z0 == 0.0 && self.w(0.0, 0.0) == 0.0 {
            return Ok(0.0);
        }
        let (_, ys) = self.run(y0, z0, t_tail)?;
        Ok(-ys.last().unwrap()[2])
    }
}

pub fn manifold_fixed_point(p: &Params, cfg: &NdConfig) -> Result<ManifoldGrid, NdError> {
    let c = NdConstants::new(p)?;
    if cfg.ny < 2 || cfg.nz < 2 {
        return Err(NdError::Radius("grid needs at least 2 nodes per axis".into()));
    }
    let variant = cfg.variant();
    let c1 = cfg.c1.unwrap_or_else(|| estimate_c1(p, &c, variant, cfg.delta, cfg.c1_safety));
    let a = c.lambda1;
    let mut radius = choose_radius(c1, cfg.c2, a, a, cfg.delta, a / 2.0)?;
    if let Some(r) = cfg.r0 {
        radius.r0 = r;
    }
    let r0 = radius.r0;
    let t_tail = ((30.0 * c1 * r0 * r0 / (a * cfg.tol)).ln() / a).max(1.0);
    let (ny, nz) = (cfg.ny, cfg.nz);
    let nodes: Vec<(f64, f64)> = (0..ny)
        .flat_map(|i| (0..nz).map(move |j| (r0 * i as f64 / (ny - 1) as f64, -r0 + 2.0 * r0 * j as f64 / (nz - 1) as f64)))
        .collect();
    let mut lip: f64 = 0.0;
    let out = picard_iterate(
        |w: &Vec<f64>| -> Result<Vec<f64>, NdError> {
            let flow = Flow { p, c: &c, variant, values: w, ny, nz, r0, tol: cfg.ode_tol };
            let next: Result<Vec<f64>, NdError> = nodes.par_iter().map(|&(y, z)| flow.t_map(y, z, t_tail)).collect();
            let next = next?;
            lip = lip.max(lipschitz(&next, ny, nz, r0));
            Ok(next)
        },
        vec![0.0; ny * nz],
        |a, b| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
        cfg.tol,
        cfg.max_iter,
    );
    let out = match out {
        Ok(o) => o,
        Err(PicardError::Operator(e)) => return Err(e),
        Err(PicardError::Diverged { ratios, .. }) => return Err(NdError::Contraction { ratios }),
    };
    if out.max_ratio() >= 1.0 {
        return Err(NdError::Contraction { ratios: out.ratios });
    }
    Ok(ManifoldGrid {
        params: *p,
        constants: c,
        r0,
        ny,
        nz,
        values: out.fixed_point,
        c1,
        c2: cfg.c2,
        radius,
        t_tail,
        final_delta: *out.deltas.last().unwrap_or(&0.0),
        ratios: out.ratios,
        deltas: out.deltas,
        lipschitz_estimate: lip,
        epsilon: cfg.epsilon,
    })
}

impl ManifoldGrid {
    pub fn node_y(&self, i: usize) -> f64 {
        self.r0 * i as f64 / (self.ny - 1) as f64
    }

    pub fn node_z(&self, j: usize) -> f64 {
        -self.r0 + 2.0 * self.r0 * j as f64 / (self.nz - 1) as f64
    }

    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nz + j]
    }

    pub fn eval(&self, y: f64, z: f64) -> f64 {
        bilinear(&self.values, self.ny, self.nz, self.r0, y, z)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn flow(&self, tol: Tolerance) -> Flow<'_> {
        Flow {
            p: &self.params,
            c: &self.constants,
            variant: H3Variant::Regularized { epsilon: self.epsilon },
            values: &self.values,
            ny: self.ny,
            nz: self.nz,
            r0: self.r0,
            tol,
        }
    }

    /// `|Tw - w|` at an arbitrary point of the domain.
    pub fn invariance_defect(&self, y: f64, z: f64, tol: Tolerance) -> Result<f64, NdError> {
        let f = self.flow(tol);
        Ok((f.t_map(y, z, self.t_tail)? - self.eval(y, z)).abs())
    }
}
