use crate::chart::{convert, z_pair, Chart, State};
use crate::ode::DenseOutput;
use params_core::Params;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    BlowUp,
    ZCrossing(f64),
    SignChange,
}

impl EventKind {
    pub fn label(&self) -> String {
        match self {
            EventKind::BlowUp => "blow_up".into(),
            EventKind::ZCrossing(l) => format!("z_crossing({l})"),
            EventKind::SignChange => "sign_change".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub coord: f64,
}

#[derive(Debug)]
pub(crate) struct DenseRepr {
    pub chart: Chart,
    pub out: DenseOutput<2>,
}

/// Radial quantities at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    pub r: f64,
    pub u: f64,
    pub du: f64,
    /// `z = r^{(n-2)/2} u`
    pub z: f64,
    /// `r z'(r)`
    pub rdz: f64,
}

/// A sampled radial solution in one chart.
///
/// Trajectories built by the integrator keep the native dense output, so
/// [`Trajectory::eval`] is exact to integration accuracy at any coordinate,
/// in any chart. Derived trajectories fall back to cubic Hermite interpolation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub chart: Chart,
    pub params: Params,
    pub samples: Vec<State>,
    pub events: Vec<Event>,
    pub metadata: String,
    dense: Option<Arc<DenseRepr>>,
}

impl Trajectory {
    pub fn new(chart: Chart, params: Params, samples: Vec<State>, events: Vec<Event>, metadata: impl Into<String>) -> Self {
        Trajectory { chart, params, samples, events, metadata: metadata.into(), dense: None }
    }

    pub(crate) fn with_dense(mut self, dense: DenseRepr) -> Self {
        self.dense = Some(Arc::new(dense));
        self
    }

    pub fn has_dense(&self) -> bool {
        self.dense.is_some()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Radius interval covered by the samples.
    pub fn r_range(&self) -> (f64, f64) {
        let a = self.chart.radius(&self.params, self.samples.first().map(|s| s.coord).unwrap_or(f64::NAN));
        let b = self.chart.radius(&self.params, self.samples.last().map(|s| s.coord).unwrap_or(f64::NAN));
        (a.min(b), a.max(b))
    }

    /// Decades of radius covered, `log10(r_max/r_min)`.
    pub fn decades(&self) -> f64 {
        let (a, b) = self.r_range();
        (b / a).log10()
    }

    pub fn has_event(&self, kind: fn(&EventKind) -> bool) -> bool {
        self.events.iter().any(|e| kind(&e.kind))
    }

    fn in_window(&self, r: f64) -> bool {
        let (a, b) = self.r_range();
        r >= a * (1.0 - 1e-12) && r <= b * (1.0 + 1e-12)
    }

    /// State at radius `r`, in this trajectory's chart.
    pub fn eval_r(&self, r: f64) -> Option<State> {
        if !(r > 0.0) || !self.in_window(r) {
            return None;
        }
        if let Some(d) = &self.dense {
            let c = d.chart.coord(&self.params, r);
            let t0 = d.out.t_start();
            let t1 = d.out.t_end();
            let c = c.clamp(t0.min(t1), t0.max(t1));
            let y = d.out.eval(c)?;
            let mut st = convert(d.chart, self.chart, &self.params, State::new(c, y[0], y[1]));
            st.coord = self.chart.coord(&self.params, r);
            return Some(st);
        }
        self.hermite(self.chart.coord(&self.params, r))
    }

    /// State at chart coordinate `coord`.
    pub fn eval(&self, coord: f64) -> Option<State> {
        let r = self.chart.radius(&self.params, coord);
        let mut st = self.eval_r(r)?;
        st.coord = coord;
        Some(st)
    }

    fn hermite(&self, c: f64) -> Option<State> {
        let s = &self.samples;
        if s.len() < 2 {
            return s.first().filter(|x| x.coord == c).copied();
        }
        let inc = s[1].coord > s[0].coord;
        let idx = if inc { s.partition_point(|x| x.coord < c) } else { s.partition_point(|x| x.coord > c) };
        let i = idx.clamp(1, s.len() - 1);
        let (a, b) = (s[i - 1], s[i]);
        let h = b.coord - a.coord;
        let th = (c - a.coord) / h;
        let h00 = 2.0 * th.powi(3) - 3.0 * th * th + 1.0;
        let h10 = th.powi(3) - 2.0 * th * th + th;
        let h01 = -2.0 * th.powi(3) + 3.0 * th * th;
        let h11 = th.powi(3) - th * th;
        let v = h00 * a.value + h10 * h * a.deriv + h01 * b.value + h11 * h * b.deriv;
        let d00 = (6.0 * th * th - 6.0 * th) / h;
        let d10 = 3.0 * th * th - 4.0 * th + 1.0;
        let d01 = (-6.0 * th * th + 6.0 * th) / h;
        let d11 = 3.0 * th * th - 2.0 * th;
        let d = d00 * a.value + d10 * a.deriv + d01 * b.value + d11 * b.deriv;
        Some(State::new(c, v, d))
    }

    /// Same solution expressed in another chart.
    pub fn to_chart(&self, target: Chart) -> Trajectory {
        let p = self.params;
        let samples = self.samples.iter().map(|s| convert(self.chart, target, &p, *s)).collect();
        let events = self
            .events
            .iter()
            .map(|e| Event { kind: e.kind, coord: target.coord(&p, self.chart.radius(&p, e.coord)) })
            .collect();
        Trajectory { chart: target, params: p, samples, events, metadata: self.metadata.clone(), dense: self.dense.clone() }
    }

    /// Restriction to radii in `[r_lo, r_hi]`, with exact endpoints added.
    pub fn restrict(&self, r_lo: f64, r_hi: f64) -> Trajectory {
        let p = self.params;
        let mut inner: Vec<State> = self
            .samples
            .iter()
            .filter(|s| {
                let r = self.chart.radius(&p, s.coord);
                r > r_lo && r < r_hi
            })
            .copied()
            .collect();
        let (a, b) = self.r_range();
        let lo = self.eval_r(r_lo.max(a));
        let hi = self.eval_r(r_hi.min(b));
        let inc = self.samples.len() < 2 || self.samples[1].coord > self.samples[0].coord;
        let r_inc = inc == (self.chart.radius(&p, 1.0) <= self.chart.radius(&p, 2.0));
        let (first, last) = if r_inc { (lo, hi) } else { (hi, lo) };
        if let Some(f) = first {
            if inner.first().map(|x| x.coord != f.coord).unwrap_or(true) {
                inner.insert(0, f);
            }
        }
        if let Some(l) = last {
            if inner.last().map(|x| x.coord != l.coord).unwrap_or(true) {
                inner.push(l);
            }
        }
        let events = self
            .events
            .iter()
            .filter(|e| {
                let r = self.chart.radius(&p, e.coord);
                r >= r_lo && r <= r_hi
            })
            .copied()
            .collect();
        Trajectory { chart: self.chart, params: p, samples: inner, events, metadata: self.metadata.clone(), dense: self.dense.clone() }
    }

    /// Radii of the dense-output step boundaries inside `[r1, r2]`, sorted.
    pub fn dense_breakpoints_r(&self, r1: f64, r2: f64) -> Option<Vec<f64>> {
        let d = self.dense.as_ref()?;
        let mut v: Vec<f64> = d
            .out
            .breakpoints()
            .into_iter()
            .map(|c| d.chart.radius(&self.params, c))
            .filter(|r| *r > r1 && *r < r2)
            .collect();
        v.push(r1);
        v.push(r2);
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        Some(v)
    }

    /// Sample points as radial quantities, ordered by increasing radius.
    pub fn radial_points(&self) -> Vec<RadialPoint> {
        let p = self.params;
        let mut v: Vec<RadialPoint> = self
            .samples
            .iter()
            .map(|s| {
                let st = convert(self.chart, Chart::R, &p, *s);
                radial_point(&p, st)
            })
            .collect();
        if v.len() > 1 && v[0].r > v[v.len() - 1].r {
            v.reverse();
        }
        v
    }

    /// Radial quantities at radius `r`.
    pub fn point_at(&self, r: f64) -> Option<RadialPoint> {
        let st = self.eval_r(r)?;
        let st = convert(self.chart, Chart::R, &self.params, st);
        Some(radial_point(&self.params, State::new(r, st.value, st.deriv)))
    }

    /// Radial quantities on a log-spaced grid covering the trajectory.
    pub fn log_grid(&self, per_decade: usize) -> Vec<RadialPoint> {
        let (a, b) = self.r_range();
        let n = ((b / a).log10() * per_decade as f64).ceil().max(1.0) as usize;
        (0..=n)
            .filter_map(|i| {
                let r = a * (b / a).powf(i as f64 / n as f64);
                self.point_at(r.clamp(a, b))
            })
            .collect()
    }
}

pub fn radial_point(p: &Params, st: State) -> RadialPoint {
    let (z, rdz) = z_pair(p, st);
    RadialPoint { r: st.coord, u: st.value, du: st.deriv, z, rdz }
}
