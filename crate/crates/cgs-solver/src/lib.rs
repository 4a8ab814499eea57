//! Solutions of the Fowler system
//!
//! ```text
//! V'' = f(V) + μ e^{-λt} V^q,   t = log(1/r),
//! ```
//!
//! converging to a prescribed periodic orbit `φ_{σ,τ}` as `t → ∞`, obtained as
//! fixed points of contraction maps on `[T0, ∞)` in the norm
//! `sup e^{λt/2}(|f1| + |f2|)`.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

mod path;
mod picard;
mod solver;

pub use path::WeightedPath;
pub use picard::{picard_iterate, PicardError, PicardOutcome};
pub use solver::{
    asymptotic_period, cgs_fixed_point, cgs_fixed_point_near_max, cgs_solution, regime_for, regime_overlap,
    rotation_eigenvalues, rotation_matrix_bound, CgsFixedPoint, CgsOptions, CgsSolution, OverlapReport, Regime,
};

use orbit_family::OrbitError;
use params_core::ParamError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CgsError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("sigma = {sigma} not admissible for the {regime:?} regime (sigma_bar = {sigma_bar})")]
    Regime { sigma: f64, sigma_bar: f64, regime: Regime },
    #[error("no contraction after T0 attempts {t0_attempts:?}; last ratios {last_ratios:?}")]
    NonContraction { t0_attempts: Vec<f64>, last_ratios: Vec<f64> },
    #[error("iterate leaves the positive cone at t = {t} (V = {value})")]
    Positivity { t: f64, value: f64 },
    #[error("invalid options: {0}")]
    Options(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}
