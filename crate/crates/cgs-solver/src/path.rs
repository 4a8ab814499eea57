//! Paths on a uniform grid in `t` and the weighted norm of the iteration space.

/// A pair of functions sampled on `t_i = t0 + i·h`, with derivatives for
/// cubic Hermite evaluation between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath {
    pub t0: f64,
    pub h: f64,
    /// Decay rate of the weight `e^{rate·t}`.
    pub rate: f64,
    pub values: Vec<[f64; 2]>,
    pub derivs: Vec<[f64; 2]>,
    /// `sup e^{rate·t}(|f1| + |f2|)` over the nodes.
    pub weighted_norm: f64,
}

impl WeightedPath {
    pub fn new(t0: f64, h: f64, rate: f64, values: Vec<[f64; 2]>, derivs: Vec<[f64; 2]>) -> Self {
        let weighted_norm = weighted_sup(t0, h, rate, &values);
        WeightedPath { t0, h, rate, values, derivs, weighted_norm }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        self.node(self.len().saturating_sub(1))
    }

    pub fn node(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.h
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Cubic Hermite interpolation; `None` outside `[t0, t_max]`.
    pub fn eval(&self, t: f64) -> Option<[f64; 2]> {
        let n = self.len();
        if n == 0 || t < self.t0 || t > self.t_max() {
            return None;
        }
        if n == 1 {
            return Some(self.values[0]);
        }
        let x = (t - self.t0) / self.h;
        let i = (x.floor() as usize).min(n - 2);
        let th = x - i as f64;
        let h = self.h;
        let h00 = 2.0 * th.powi(3) - 3.0 * th * th + 1.0;
        let h10 = th.powi(3) - 2.0 * th * th + th;
        let h01 = -2.0 * th.powi(3) + 3.0 * th * th;
        let h11 = th.powi(3) - th * th;
        let (a, b) = (self.values[i], self.values[i + 1]);
        let (da, db) = (self.derivs[i], self.derivs[i + 1]);
        Some([0, 1].map(|k| h00 * a[k] + h10 * h * da[k] + h01 * b[k] + h11 * h * db[k]))
    }
}

pub(crate) fn weighted_sup(t0: f64, h: f64, rate: f64, v: &[[f64; 2]]) -> f64 {
    v.iter()
        .enumerate()
        .map(|(i, x)| (rate * (t0 + i as f64 * h)).exp() * (x[0].abs() + x[1].abs()))
        .fold(0.0, f64::max)
}

/// Weighted sup-distance between two sampled pairs on the same grid.
pub(crate) fn weighted_dist(t0: f64, h: f64, rate: f64, a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| (rate * (t0 + i as f64 * h)).exp() * ((x[0] - y[0]).abs() + (x[1] - y[1]).abs()))
        .fold(0.0, f64::max)
}

/// `I_i = ∫_{t_i}^{t_N} g` on a uniform grid with fourth-order local rules.
pub(crate) fn tail_integrals(g: &[f64], h: f64) -> Vec<f64> {
    let n = g.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    let seg = |i: usize| -> f64 {
        if n < 4 {
            return 0.5 * h * (g[i] + g[i + 1]);
        }
        if i == 0 {
            h / 24.0 * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3])
        } else if i + 2 >= n {
            h / 24.0 * (g[i - 2] - 5.0 * g[i - 1] + 19.0 * g[i] + 9.0 * g[i + 1])
        } else {
            h / 24.0 * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2])
        }
    };
    for i in (0..n - 1).rev() {
        out[i] = out[i + 1] + seg(i);
    }
    out
}

/// `φ^m[(1+x)^m - 1 - m x]` with `x = δ/φ`, free of cancellation for small `x`.
pub(crate) fn power_remainder(m: f64, phi: f64, delta: f64) -> f64 {
    let x = delta / phi;
    let pm = phi.powf(m);
    if x.abs() < 1e-3 {
        let mut term = m * (m - 1.0) / 2.0 * x * x;
        let mut sum = term;
        let mut j = 2.0;
        while term.abs() > 1e-18 * sum.abs() && j < 30.0 {
            term *= (m - j) / (j + 1.0) * x;
            sum += term;
            j += 1.0;
        }
        pm * sum
    } else {
        pm * ((1.0 + x).powf(m) - 1.0 - m * x)
    }
}
