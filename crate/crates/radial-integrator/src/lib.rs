//! Radial solutions of `-Δu = r^{-s}u^{2*(s)-1} - μu^q` in three charts.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod chart;
mod error;
pub mod integrate;
pub mod io;
pub mod kelvin;
pub mod ode;
pub mod trajectory;

pub use chart::{convert, rhs_eval, z_pair, Chart, Orientation, State};
pub use error::RadialError;
pub use integrate::{
    integrate, removable_series, shoot_removable, shoot_removable_log, xi_curvature_at_origin, xi_scale, EventSpec,
    IntegrateOptions, ShootOptions,
};
pub use kelvin::{kelvin_residual, kelvin_transform};
pub use ode::Tolerance;
pub use trajectory::{radial_point, Event, EventKind, RadialPoint, Trajectory};
