//! Trajectory CSV: `coord,value,deriv,z,dz` with shortest round-trip floats.

use crate::chart::{z_pair, Chart, State};
use crate::trajectory::Trajectory;
use crate::RadialError;
use params_core::Params;
use std::io::{BufRead, Write};

pub const CSV_HEADER: &str = "coord,value,deriv,z,dz";

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        let mut b = ryu::Buffer::new();
        b.format_finite(x).to_string()
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// `(z, dz)` columns: `z = r^k u` and its derivative in the chart coordinate.
fn z_columns(chart: Chart, p: &Params, s: &State) -> Option<(f64, f64)> {
    match chart {
        Chart::R => {
            let (z, rdz) = z_pair(p, *s);
            Some((z, rdz / s.coord))
        }
        Chart::Log(_) => Some((s.value, s.deriv)),
        Chart::Xi => None,
    }
}

pub fn write_csv<W: Write>(traj: &Trajectory, mut w: W) -> Result<(), RadialError> {
    let io = |e: std::io::Error| RadialError::Io(e.to_string());
    writeln!(w, "{CSV_HEADER}").map_err(io)?;
    for s in &traj.samples {
        let (z, dz) = match z_columns(traj.chart, &traj.params, s) {
            Some((z, dz)) => (fmt_f64(z), fmt_f64(dz)),
            None => (String::new(), String::new()),
        };
        writeln!(w, "{},{},{},{},{}", fmt_f64(s.coord), fmt_f64(s.value), fmt_f64(s.deriv), z, dz).map_err(io)?;
    }
    Ok(())
}

pub fn read_csv<R: BufRead>(r: R, chart: Chart, params: Params) -> Result<Trajectory, RadialError> {
    let mut samples = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| RadialError::Io(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if i == 0 {
            if line != CSV_HEADER {
                return Err(RadialError::Parse(format!("unexpected header `{line}`")));
            }
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 3 {
            return Err(RadialError::Parse(format!("line {}: expected at least 3 columns", i + 1)));
        }
        let num = |j: usize| {
            cols[j].trim().parse::<f64>().map_err(|e| RadialError::Parse(format!("line {}: {e}", i + 1)))
        };
        samples.push(State::new(num(0)?, num(1)?, num(2)?));
    }
    if samples.len() < 2 {
        return Err(RadialError::Parse("fewer than two samples".into()));
    }
    let inc = samples[1].coord > samples[0].coord;
    if samples.windows(2).any(|w| (w[1].coord > w[0].coord) != inc || w[1].coord == w[0].coord) {
        return Err(RadialError::Parse("coordinates are not strictly monotone".into()));
    }
    Ok(Trajectory::new(chart, params, samples, Vec::new(), "read from csv"))
}
