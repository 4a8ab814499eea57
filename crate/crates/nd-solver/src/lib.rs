//! Singular solutions with `r^ϑ u(r) → μ^{-1/(q-2*(s)+1)}` as `r → 0`,
//! built from a center-stable manifold of a three-variable autonomous system.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod manifold;
pub mod radius;
pub mod solution;
pub mod system;

pub use manifold::{manifold_fixed_point, ManifoldGrid, NdConfig};
pub use radius::{choose_radius, estimate_c1, InequalityCheck, RadiusChoice};
pub use solution::{nd_solution, sup_distance, NdHorizon, NdSolution};
pub use system::{
    conjugated_jacobian, diagonal_change, diagonal_rhs, eigen_residuals, eigenpairs, h_functions, jacobian_at_origin,
    nd_rhs, numeric_jacobian, psi_eps, Direction, H3Variant, NdConstants,
};

use params_core::ParamError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NdError {
    #[error("q = {q} outside the range 2*(s)-1 < q < 2*-1")]
    NotAdmissible { q: f64 },
    #[error("{0} is undefined for these parameters")]
    Undefined(&'static str),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("radius selection: {0}")]
    Radius(String),
    #[error("T-map is not a contraction (ratios {ratios:?}); try a smaller r0")]
    Contraction { ratios: Vec<f64> },
    #[error("flow left the box: y = {y}, z = {z}, r0 = {r0}")]
    FlowEscape { y: f64, z: f64, r0: f64 },
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("initial point ({y20}, {z30}) outside (0, r0] x [-r0, r0] with r0 = {r0}")]
    Domain { y20: f64, z30: f64, r0: f64 },
    #[error("1 - X1 X2 = {value} < epsilon at t = {t}")]
    RegularizationBreach { t: f64, value: f64 },
}
