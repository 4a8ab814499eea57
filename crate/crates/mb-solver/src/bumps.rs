use params_core::{bubble_eval, bubble_peak_z, DerivedConstants};
use radial_integrator::{RadialPoint, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpOptions {
    /// Minimum prominence as a fraction of `Λ0`.
    pub prominence_frac: f64,
    pub per_decade: usize,
}

impl Default for BumpOptions {
    fn default() -> Self {
        BumpOptions { prominence_frac: 0.1, per_decade: 200 }
    }
}

/// A local maximum of `z(r)` with the bubble `U_η`, `η = r`, matched at the peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub r: f64,
    pub z: f64,
    pub prominence: f64,
    /// `z / max_r r^{(n-2)/2}U_1 - 1`.
    pub peak_deviation: f64,
    /// `max |u/U_η - 1|` where `z ≥ z_peak/2` around the peak.
    pub halfwidth_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BumpReport {
    /// Ordered by decreasing radius.
    pub bumps: Vec<Bump>,
    /// `r_{k+1}/r_k`.
    pub spacing_ratios: Vec<f64>,
    /// Index of the most prominent bump.
    pub strongest: Option<usize>,
}

impl BumpReport {
    /// At least two ratios, each smaller than the one before.
    pub fn spacing_decreasing(&self) -> bool {
        self.spacing_ratios.len() >= 2 && self.spacing_ratios.windows(2).all(|w| w[1] < w[0])
    }

    pub fn max_peak_deviation(&self) -> f64 {
        self.bumps.iter().map(|b| b.peak_deviation.abs()).fold(0.0, f64::max)
    }
}

/// Maximises `z` in `log r` on `[a, b]` by golden-section search.
fn refine_peak(traj: &Trajectory, a: f64, b: f64) -> Option<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let z = |t: f64| traj.point_at(t.exp()).map(|p| p.z).unwrap_or(f64::NEG_INFINITY);
    let (mut lo, mut hi) = (a.ln(), b.ln());
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (z(x1), z(x2));
    for _ in 0..100 {
        if (hi - lo).abs() < 1e-12 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = z(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = z(x1);
        }
    }
    let t = 0.5 * (lo + hi);
    traj.point_at(t.exp()).map(|p| (p.r, p.z))
}

/// Local maxima of `z(r)` in `log r` that stand out by the prominence threshold.
///
/// Prominence is the drop to the lower of the two neighbouring minima; an end
/// of the trajectory counts as a minimum on that side.
pub fn bump_analysis(traj: &Trajectory, opts: &BumpOptions) -> BumpReport {
    let p = traj.params;
    let threshold = DerivedConstants::derive(&p).map(|d| opts.prominence_frac * d.lambda0).unwrap_or(0.0);
    let pts: Vec<RadialPoint> = traj.log_grid(opts.per_decade);
    if pts.len() < 3 {
        return BumpReport { bumps: Vec::new(), spacing_ratios: Vec::new(), strongest: None };
    }
    let zp = bubble_peak_z(&p);
    let mut bumps = Vec::new();
    for i in 1..pts.len() - 1 {
        if !(pts[i].z > pts[i - 1].z && pts[i].z >= pts[i + 1].z) {
            continue;
        }
        let zi = pts[i].z;
        let mut left = zi;
        for q in pts[..i].iter().rev() {
            if q.z > zi {
                break;
            }
            left = left.min(q.z);
        }
        let mut right = zi;
        for q in &pts[i + 1..] {
            if q.z > zi {
                break;
            }
            right = right.min(q.z);
        }
        let prominence = zi - left.max(right);
        if prominence < threshold {
            continue;
        }
        let (r, z) = refine_peak(traj, pts[i - 1].r, pts[i + 1].r).unwrap_or((pts[i].r, zi));
        let mut hw: f64 = 0.0;
        for q in pts[..i].iter().rev().take_while(|q| q.z >= z / 2.0).chain(pts[i..].iter().take_while(|q| q.z >= z / 2.0)) {
            hw = hw.max((q.u / bubble_eval(&p, r, q.r) - 1.0).abs());
        }
        bumps.push(Bump { r, z, prominence, peak_deviation: z / zp - 1.0, halfwidth_deviation: hw });
    }
    bumps.sort_by(|a, b| b.r.partial_cmp(&a.r).unwrap());
    let spacing_ratios = bumps.windows(2).map(|w| w[1].r / w[0].r).collect();
    let strongest = bumps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.prominence.partial_cmp(&b.1.prominence).unwrap())
        .map(|(i, _)| i);
    BumpReport { bumps, spacing_ratios, strongest }
}
