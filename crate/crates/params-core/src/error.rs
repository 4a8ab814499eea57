use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("dimension n = {0} must be at least 3")]
    Dimension(u32),
    #[error("exponent s = {0} must lie in (0, 2)")]
    HardyExponent(f64),
    #[error("power q = {0} must exceed 1")]
    Power(f64),
    #[error("mu = {0} must be finite and non-negative")]
    Mu(f64),
    #[error("radius R = {0} must be positive")]
    Radius(f64),
    #[error("argument {0} is negative")]
    NegativeArgument(f64),
    #[error("Lambda = {lambda} must exceed Lambda0 = {lambda0}")]
    LambdaTooSmall { lambda: f64, lambda0: f64 },
    #[error("q = {q} outside the required range ({lo}, {hi})")]
    QOutOfRange { q: f64, lo: f64, hi: f64 },
    #[error("mu must be positive for this quantity")]
    MuNotPositive,
    #[error("maximisation failed: {0}")]
    NoMaximum(String),
}
