//! Dormand–Prince 5(4) with the standard fourth-order dense output.

use thiserror::Error;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rtol: 1e-10, atol: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub tol: Tolerance,
    pub h0: Option<f64>,
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { tol: Tolerance::default(), h0: None, h_max: None, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size collapsed to {h:e} at t = {t}")]
    StepCollapse { t: f64, h: f64 },
    #[error("exceeded {0} steps")]
    TooManySteps(usize),
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
    #[error("degenerate span [{0}, {1}]")]
    EmptySpan(f64, f64),
}

#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    rc: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let mut out = [0.0; N];
        for i in 0..N {
            let r = &self.rc;
            out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        out
    }

    fn t1(&self) -> f64 {
        self.t0 + self.h
    }
}

/// Piecewise polynomial interpolant over all accepted steps.
#[derive(Debug, Clone)]
pub struct DenseOutput<const N: usize> {
    steps: Vec<DenseStep<N>>,
    forward: bool,
    end: f64,
}

impl<const N: usize> DenseOutput<N> {
    pub fn t_start(&self) -> f64 {
        self.steps.first().map(|s| s.t0).unwrap_or(f64::NAN)
    }

    pub fn t_end(&self) -> f64 {
        self.end
    }

    pub fn contains(&self, t: f64) -> bool {
        let (a, b) = (self.t_start(), self.t_end());
        t >= a.min(b) && t <= a.max(b)
    }

    /// Step boundaries, in integration order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.steps.iter().map(|s| s.t0).collect();
        if !self.steps.is_empty() {
            v.push(self.end);
        }
        v
    }

    pub fn eval(&self, t: f64) -> Option<[f64; N]> {
        if self.steps.is_empty() || !self.contains(t) {
            return None;
        }
        let idx = if self.forward {
            self.steps.partition_point(|s| s.t1() < t)
        } else {
            self.steps.partition_point(|s| s.t1() > t)
        };
        let idx = idx.min(self.steps.len() - 1);
        Some(self.steps[idx].eval(t))
    }

    fn truncate_at(&mut self, t: f64) {
        let keep = if self.forward {
            self.steps.partition_point(|s| s.t0 < t)
        } else {
            self.steps.partition_point(|s| s.t0 > t)
        };
        self.steps.truncate(keep.max(1));
        self.end = t;
    }
}

/// Scalar event function with its terminal flag.
pub struct EventFn<'a, const N: usize> {
    pub g: Box<dyn Fn(f64, &[f64; N]) -> f64 + 'a>,
    pub terminal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventHit<const N: usize> {
    pub index: usize,
    pub t: f64,
    pub y: [f64; N],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    Completed,
    Terminal(usize),
    Collapse,
}

#[derive(Debug, Clone)]
pub struct OdeSolution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub events: Vec<EventHit<N>>,
    pub dense: DenseOutput<N>,
    pub stop: Stop,
    pub t_stop: f64,
    pub steps: usize,
    pub rejected: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

fn finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Bisection on the interval `[a, b]` of the dense step for a sign change of `g`.
fn refine<const N: usize>(step: &DenseStep<N>, g: &dyn Fn(f64, &[f64; N]) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a, &step.eval(a));
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let gm = g(m, &step.eval(m));
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end` (either direction).
///
/// Non-terminal events are recorded; the first terminal event stops the run.
/// A collapsing step size ends the run with [`Stop::Collapse`] so callers can
/// decide whether it indicates blow-up.
pub fn solve<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    events: &[EventFn<'_, N>],
) -> Result<OdeSolution<N>, OdeError>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if !(t_end != t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(OdeError::EmptySpan(t0, t_end));
    }
    if !finite(&y0) {
        return Err(OdeError::NonFinite(t0));
    }
    let dir = (t_end - t0).signum();
    let span = (t_end - t0).abs();
    let tol = opts.tol;
    let h_max = opts.h_max.unwrap_or(span);

    let sc = |a: &[f64; N], b: &[f64; N], i: usize| tol.atol + tol.rtol * a[i].abs().max(b[i].abs());

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    if !finite(&k1) {
        return Err(OdeError::NonFinite(t0));
    }

    let mut h = match opts.h0 {
        Some(h) => h.abs().min(h_max),
        None => {
            let d0 = (0..N).map(|i| (y[i] / sc(&y, &y, i)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
            let d1 = (0..N).map(|i| (k1[i] / sc(&y, &y, i)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
            let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span.max(1e-300) } else { 0.01 * d0 / d1 };
            let y1 = axpy(&y, dir * h0, &[(1.0, &k1)]);
            let f1 = f(t + dir * h0, &y1);
            let d2 = (0..N).map(|i| ((f1[i] - k1[i]) / sc(&y, &y, i)).powi(2)).sum::<f64>().sqrt()
                / (N as f64).sqrt()
                / h0;
            let h1 = if d1.max(d2) <= 1e-15 {
                (h0 * 1e-3).max(1e-6)
            } else {
                (0.01 / d1.max(d2)).powf(0.2)
            };
            (100.0 * h0).min(h1).min(h_max)
        }
    };
    h = h.max(1e-300);

    let mut sol = OdeSolution {
        t: vec![t],
        y: vec![y],
        events: Vec::new(),
        dense: DenseOutput { steps: Vec::new(), forward: dir > 0.0, end: t0 },
        stop: Stop::Completed,
        t_stop: t_end,
        steps: 0,
        rejected: 0,
    };
    let mut g_prev: Vec<f64> = events.iter().map(|e| (e.g)(t, &y)).collect();
    let mut err_prev: f64 = 1e-4;
    let mut last_rejected = false;

    loop {
        if sol.steps >= opts.max_steps {
            return Err(OdeError::TooManySteps(opts.max_steps));
        }
        let remaining = (t_end - t).abs();
        if remaining <= 1e-15 * t_end.abs().max(1e-300) {
            break;
        }
        let mut hs = h.min(remaining);
        if remaining - hs < 1e-12 * remaining {
            hs = remaining;
        }
        if hs < 16.0 * f64::EPSILON * t.abs() || hs < 1e-300 {
            sol.stop = Stop::Collapse;
            sol.t_stop = t;
            break;
        }
        let hh = dir * hs;

        let k2 = f(t + C2 * hh, &axpy(&y, hh, &[(A21, &k1)]));
        let k3 = f(t + C3 * hh, &axpy(&y, hh, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * hh, &axpy(&y, hh, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * hh, &axpy(&y, hh, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let y6 = axpy(&y, hh, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let k6 = f(t + hh, &y6);
        let y_new = axpy(&y, hh, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + hh, &y_new);

        let mut err = 0.0;
        let mut ok = finite(&y_new) && finite(&k7) && finite(&k2) && finite(&k6);
        if ok {
            for i in 0..N {
                let e = hh * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                err += (e / sc(&y, &y_new, i)).powi(2);
            }
            err = (err / N as f64).sqrt();
            ok = err.is_finite();
        }
        if !ok {
            sol.rejected += 1;
            h = hs * 0.25;
            last_rejected = true;
            continue;
        }

        if err > 1.0 {
            sol.rejected += 1;
            let fac = (0.9 * err.powf(-0.2)).max(0.2);
            h = hs * fac;
            last_rejected = true;
            continue;
        }

        // PI controller (Gustafsson-style exponents as in dopri5)
        let mut fac = 0.9 * err.max(1e-10).powf(-0.17) * err_prev.powf(0.04);
        fac = fac.clamp(0.2, 10.0);
        if last_rejected {
            fac = fac.min(1.0);
        }
        err_prev = err.max(1e-4);
        last_rejected = false;

        let mut rc = [[0.0; N]; 5];
        for i in 0..N {
            let ydiff = y_new[i] - y[i];
            let bspl = hh * k1[i] - ydiff;
            rc[0][i] = y[i];
            rc[1][i] = ydiff;
            rc[2][i] = bspl;
            rc[3][i] = ydiff - hh * k7[i] - bspl;
            rc[4][i] = hh * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        let step = DenseStep { t0: t, h: hh, rc };
        let t_new = t + hh;

        let mut terminal: Option<(f64, usize)> = None;
        for (idx, ev) in events.iter().enumerate() {
            let g_new = (ev.g)(t_new, &y_new);
            let gp = g_prev[idx];
            if gp != 0.0 && g_new.is_finite() && (g_new == 0.0 || (g_new > 0.0) != (gp > 0.0)) {
                let te = if g_new == 0.0 { t_new } else { refine(&step, &*ev.g, t, t_new) };
                let ye = step.eval(te);
                if ev.terminal {
                    let earlier = match terminal {
                        None => true,
                        Some((tt, _)) => (te - tt) * dir < 0.0,
                    };
                    if earlier {
                        terminal = Some((te, idx));
                    }
                } else {
                    sol.events.push(EventHit { index: idx, t: te, y: ye });
                }
            }
            g_prev[idx] = g_new;
        }

        sol.dense.steps.push(step);
        sol.dense.end = t_new;
        sol.steps += 1;
        if let Some((te, idx)) = terminal {
            // drop non-terminal hits beyond the terminal point
            sol.events.retain(|e| (e.t - te) * dir <= 0.0);
            let ye = sol.dense.eval(te).unwrap_or(y_new);
            sol.events.push(EventHit { index: idx, t: te, y: ye });
            sol.t.push(te);
            sol.y.push(ye);
            sol.stop = Stop::Terminal(idx);
            sol.t_stop = te;
            sol.dense.truncate_at(te);
            return Ok(sol);
        }

        t = t_new;
        y = y_new;
        k1 = k7;
        sol.t.push(t);
        sol.y.push(y);
        h = (hs * fac).min(h_max);
    }
    if sol.stop == Stop::Completed {
        sol.t_stop = t;
    }
    Ok(sol)
}
