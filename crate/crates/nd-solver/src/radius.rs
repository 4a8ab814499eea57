use crate::system::{h_functions, H3Variant, NdConstants};
use crate::NdError;
use params_core::Params;

/// One of the smallness conditions on `r0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusChoice {
    pub r0: f64,
    /// Upper bounds on `r0` from each condition, and `δ/2`.
    pub bounds: Vec<(&'static str, f64)>,
    pub checklist: Vec<InequalityCheck>,
}

impl RadiusChoice {
    pub fn all_hold(&self) -> bool {
        self.checklist.iter().all(|c| c.holds)
    }
}

/// `r0 = 0.9·min` of the bounds implied by
///
/// ```text
/// 4C1(1+C2²)r0 ≤ |c|,  3C1(3+2C2)r0 < ρ,  6C1(1+C2)r0 < aC2,  12C1 r0(2+C2) < a,  r0 < δ/2
/// ```
pub fn choose_radius(c1: f64, c2: f64, a: f64, c_abs: f64, delta: f64, rho: f64) -> Result<RadiusChoice, NdError> {
    for (name, v) in [("C1", c1), ("C2", c2), ("a", a), ("|c|", c_abs), ("delta", delta), ("rho", rho)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(NdError::Radius(format!("{name} = {v} must be positive")));
        }
    }
    let bounds = vec![
        ("4C1(1+C2^2) r0 <= |c|", c_abs / (4.0 * c1 * (1.0 + c2 * c2))),
        ("3C1(3+2C2) r0 < rho", rho / (3.0 * c1 * (3.0 + 2.0 * c2))),
        ("6C1(1+C2) r0 < a C2", a * c2 / (6.0 * c1 * (1.0 + c2))),
        ("12C1 r0 (2+C2) < a", a / (12.0 * c1 * (2.0 + c2))),
        ("r0 < delta/2", delta / 2.0),
    ];
    let r0 = 0.9 * bounds.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
    if !(r0 > 0.0) {
        return Err(NdError::Radius(format!("non-positive r0 = {r0}")));
    }
    let checklist = vec![
        check("4C1(1+C2^2) r0 <= |c|", 4.0 * c1 * (1.0 + c2 * c2) * r0, c_abs),
        check("3C1(3+2C2) r0 < rho", 3.0 * c1 * (3.0 + 2.0 * c2) * r0, rho),
        check("6C1(1+C2) r0 < a C2", 6.0 * c1 * (1.0 + c2) * r0, a * c2),
        check("12C1 r0 (2+C2) < a", 12.0 * c1 * r0 * (2.0 + c2), a),
        check("r0 < delta/2", r0, delta / 2.0),
    ];
    Ok(RadiusChoice { r0, bounds, checklist })
}

fn check(name: &'static str, lhs: f64, rhs: f64) -> InequalityCheck {
    InequalityCheck { name, lhs, rhs, holds: lhs < rhs }
}

/// Sampled `C1` with `Σ|h_j| ≤ C1 Σξ_j²` and `Σ|∇h_j| ≤ C1 Σ|ξ_j|` on `B_δ(0)`.
///
/// Samples lie on a cubic lattice of spacing `δ/8` inside the ball; gradients
/// are central differences. The returned value is the sampled maximum times
/// `safety`.
pub fn estimate_c1(p: &Params, c: &NdConstants, variant: H3Variant, delta: f64, safety: f64) -> f64 {
    let steps = 8i32;
    let sp = delta / steps as f64;
    let fd = 1e-6 * delta;
    let mut worst: f64 = 0.0;
    for i in -steps..=steps {
        for j in -steps..=steps {
            for k in -steps..=steps {
                let z = [i as f64 * sp, j as f64 * sp, k as f64 * sp];
                let n2: f64 = z.iter().map(|x| x * x).sum();
                if n2 == 0.0 || n2 > delta * delta {
                    continue;
                }
                let n1: f64 = z.iter().map(|x| x.abs()).sum();
                let h = h_functions(p, c, variant, z);
                worst = worst.max(h.iter().map(|x| x.abs()).sum::<f64>() / n2);
                let mut grads = [[0.0; 3]; 3];
                for col in 0..3 {
                    let mut a = z;
                    let mut b = z;
                    a[col] += fd;
                    b[col] -= fd;
                    let (ha, hb) = (h_functions(p, c, variant, a), h_functions(p, c, variant, b));
                    for row in 0..3 {
                        grads[row][col] = (ha[row] - hb[row]) / (2.0 * fd);
                    }
                }
                let gsum: f64 = grads.iter().map(|g| g.iter().map(|x| x * x).sum::<f64>().sqrt()).sum();
                worst = worst.max(gsum / n1);
            }
        }
    }
    safety * worst
}
