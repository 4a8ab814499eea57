use crate::ode::OdeError;
use params_core::ParamError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadialError {
    #[error("non-positive value {value} at coordinate {coord}")]
    NonPositive { coord: f64, value: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("io: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}
