use crate::config::RunConfig;
use crate::CliError;
use radial_integrator::io::{fmt_f64, write_csv};
use radial_integrator::{State, Trajectory};
use serde_json::{json, Value};
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RADPROF_OUT_DIR";

pub fn resolve_dir(cfg: &RunConfig) -> PathBuf {
    if let Some(d) = cfg.text("output.dir") {
        return PathBuf::from(d);
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from("out"),
    }
}

/// `x` rounded to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Files written by one run.
#[derive(Debug)]
pub struct Output {
    pub dir: PathBuf,
    pub csv: bool,
    pub json: bool,
    pub precision: Option<usize>,
    pub files: Vec<String>,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

impl Output {
    pub fn new(cfg: &RunConfig) -> Output {
        Output {
            dir: resolve_dir(cfg),
            csv: cfg.bool_or("output.csv", true),
            json: cfg.bool_or("output.json", true),
            precision: cfg.int("output.precision").map(|p| p as usize),
            files: Vec::new(),
        }
    }

    fn path(&mut self, name: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
        self.files.push(name.to_string());
        Ok(path)
    }

    fn num(&self, x: f64) -> f64 {
        self.precision.map_or(x, |d| round_sig(x, d))
    }

    pub fn trajectory(&mut self, name: &str, traj: &Trajectory) -> Result<(), CliError> {
        if !self.csv {
            return Ok(());
        }
        let rounded;
        let traj = match self.precision {
            None => traj,
            Some(_) => {
                let samples =
                    traj.samples.iter().map(|s| State::new(self.num(s.coord), self.num(s.value), self.num(s.deriv))).collect();
                rounded = Trajectory::new(traj.chart, traj.params, samples, traj.events.clone(), traj.metadata.clone());
                &rounded
            }
        };
        let path = self.path(name)?;
        let f = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
        write_csv(traj, BufWriter::new(f)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    /// Plain numeric table; `None` cells are left empty.
    pub fn table(&mut self, name: &str, header: &str, rows: &[Vec<Option<f64>>]) -> Result<(), CliError> {
        if !self.csv {
            return Ok(());
        }
        let mut text = String::with_capacity(rows.len() * 64);
        text.push_str(header);
        text.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(|x| fmt_f64(self.num(x))).unwrap_or_default()).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        let path = self.path(name)?;
        fs::write(&path, text).map_err(|e| io_err(&path, e))
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        if !self.json {
            return Ok(());
        }
        let path = self.path(name)?;
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))
    }

    /// `manifest.json` with the configuration, module versions and tolerances.
    pub fn manifest(&mut self, command: &str, cfg: &RunConfig, tolerances: &Value, status: &str) -> Result<(), CliError> {
        let value = json!({
            "command": command,
            "status": status,
            "config": cfg.to_json(),
            "versions": crate::module_versions(),
            "tolerances": tolerances,
            "outputs": self.files,
        });
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        let path = self.dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))
    }
}
