//! Multi-bump singular solutions as limits of removable solutions with
//! `u(0) = γ → ∞`, with bump detection and the curvature diagnostic of the
//! associated prescribed-curvature problem.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

mod bumps;
mod continuation;
mod curvature;

pub use bumps::{bump_analysis, Bump, BumpOptions, BumpReport};
pub use continuation::{
    geometric_schedule, mb_continuation, resolved_radius, successive_differences, CauchyReport, ContinuationRun, MbConfig, Member,
};
pub use curvature::{corollary_q, curvature_diagnostics, CurvatureReport, CurvatureSample};

use params_core::ParamError;
use radial_integrator::RadialError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MbError {
    #[error("q = {q} outside (2*-2, 2*-1)")]
    NotAdmissible { q: f64 },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error("z = {z} exceeds Lambda = {lambda} at r = {r} for gamma = {gamma}; use a smaller outer radius")]
    BoundViolation { gamma: f64, r: f64, z: f64, lambda: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("curvature diagnostic: {0}")]
    Domain(String),
}
