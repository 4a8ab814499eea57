//! Parameters and closed-form quantities for the radial problem
//!
//! ```text
//! -Δu = r^{-s} u^{2*(s)-1} - μ u^q,   r = |x| ∈ (0, R)
//! ```
//!
//! Everything here is a pure function of [`Params`].

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

mod constants;
mod error;
mod functions;
mod thresholds;

pub use constants::{sphere_area, DerivedConstants};
pub use error::ParamError;
pub use functions::{
    bubble_deriv, bubble_eval, bubble_peak_z, f, f_prime, potential_eval, F0, F0_prime, FR, Potential,
};
pub use thresholds::{
    ell_q_closed, ell_q_sup, lambda_star, r_lambda, r_star, radius_thresholds, xi_c, EllSup, RStar,
    RadiusThresholds,
};

/// Problem parameters `(n, s, μ, q)` plus an optional domain radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub n: u32,
    pub s: f64,
    pub mu: f64,
    pub q: f64,
    pub radius: Option<f64>,
}

impl Params {
    pub fn new(n: u32, s: f64, mu: f64, q: f64) -> Result<Self, ParamError> {
        let p = Params { n, s, mu, q, radius: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self, ParamError> {
        self.radius = Some(radius);
        self.validate()?;
        Ok(self)
    }

    /// The canonical test instance `n=3, s=1, μ=1, q=4.5`.
    pub fn canonical() -> Self {
        Params { n: 3, s: 1.0, mu: 1.0, q: 4.5, radius: None }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.n < 3 {
            return Err(ParamError::Dimension(self.n));
        }
        if !(self.s > 0.0 && self.s < 2.0) {
            return Err(ParamError::HardyExponent(self.s));
        }
        if !(self.q.is_finite() && self.q > 1.0) {
            return Err(ParamError::Power(self.q));
        }
        if !(self.mu.is_finite() && self.mu >= 0.0) {
            return Err(ParamError::Mu(self.mu));
        }
        if let Some(r) = self.radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(ParamError::Radius(r));
            }
        }
        Ok(())
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `(n-2)/2`, the Fowler exponent.
    pub fn k(&self) -> f64 {
        (self.nf() - 2.0) / 2.0
    }

    /// Hardy–Sobolev exponent `2*(s) = 2(n-s)/(n-2)`.
    pub fn two_star_s(&self) -> f64 {
        2.0 * (self.nf() - self.s) / (self.nf() - 2.0)
    }

    /// Sobolev exponent `2* = 2n/(n-2)`.
    pub fn two_star(&self) -> f64 {
        2.0 * self.nf() / (self.nf() - 2.0)
    }

    /// `λ = (n-2)(2*-1-q)/2`.
    pub fn lambda(&self) -> f64 {
        (self.nf() - 2.0) * (self.two_star() - 1.0 - self.q) / 2.0
    }

    /// `c_{μ,q,n} = λμ/(q+1)`.
    pub fn c_mu(&self) -> f64 {
        self.lambda() * self.mu / (self.q + 1.0)
    }

    /// `q - 2*(s) + 1`.
    pub fn kq(&self) -> f64 {
        self.q - self.two_star_s() + 1.0
    }

    pub fn nd_admissible(&self) -> bool {
        self.q > self.two_star_s() - 1.0 && self.q < self.two_star() - 1.0
    }

    pub fn mb_admissible(&self) -> bool {
        self.q > self.two_star() - 2.0 && self.q < self.two_star() - 1.0
    }
}

/// Real power of a non-negative base.
#[inline]
pub(crate) fn pw(x: f64, e: f64) -> f64 {
    debug_assert!(x >= 0.0, "negative base {x}");
    if x == 0.0 {
        if e > 0.0 {
            0.0
        } else if e == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (e * x.ln()).exp()
    }
}
