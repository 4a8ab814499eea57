//! Driver for the radial profile solvers: argument parsing, configuration,
//! and file output.
//!
//! Exit codes: `0` success, `2` invalid input, `3` numeric failure,
//! `4` inconclusive result. Write failures exit with `1`.

pub mod commands;
pub mod config;
pub mod output;

use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use output::Output;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("write failed: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    Inconclusive(String),
}

pub fn module_versions() -> Value {
    json!({
        "params-core": params_core::VERSION,
        "radial-integrator": radial_integrator::VERSION,
        "pohozaev": pohozaev::VERSION,
        "orbit-family": orbit_family::VERSION,
        "cgs-solver": cgs_solver::VERSION,
        "nd-solver": nd_solver::VERSION,
        "mb-solver": mb_solver::VERSION,
        "classifier": classifier::VERSION,
        "cli": env!("CARGO_PKG_VERSION"),
    })
}

#[derive(Debug, Parser)]
#[command(name = "radprof", version, about = "Radial singular solutions: shooting, orbits, CGS, ND and MB profiles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// key=value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Outer radius of the ball
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Output directory (default: $RADPROF_OUT_DIR or ./out)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Extra configuration entries
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived constants as a name/value map
    Constants {
        #[command(flatten)]
        common: Common,
        /// Print JSON on stdout
        #[arg(long)]
        json: bool,
    },
    /// Sample the bubble U_eta
    Bubble {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        rmin: Option<f64>,
        #[arg(long)]
        rmax: Option<f64>,
    },
    /// Removable solution with u(0+) = gamma
    Shoot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        rmax: Option<f64>,
    },
    /// One period of the orbit at energy sigma
    Orbit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Solution converging to the orbit (sigma, tau)
    Cgs {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        tau_angle: Option<f64>,
        #[arg(long)]
        horizon: Option<f64>,
    },
    /// Non-differential solutions from the center-stable manifold
    Nd {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        y20: Option<f64>,
        #[arg(long)]
        z30: Option<f64>,
        /// Number of evenly spaced z30 values
        #[arg(long)]
        z30_sweep: Option<u64>,
    },
    /// Multi-bump candidate by continuation in gamma
    Mb {
        #[command(flatten)]
        common: Common,
        #[arg(long = "Lambda")]
        lambda_cap: Option<f64>,
        #[arg(long)]
        gamma_end: Option<f64>,
        #[arg(long)]
        gamma_ratio: Option<f64>,
        #[arg(long)]
        ell: Option<f64>,
        #[arg(long)]
        save_members: bool,
    },
    /// Pohozaev quantity along a trajectory
    Pohozaev {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        chart: Option<String>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        rmax: Option<f64>,
    },
    /// Label a trajectory CSV
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        chart: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants { .. } => "constants",
            Command::Bubble { .. } => "bubble",
            Command::Shoot { .. } => "shoot",
            Command::Orbit { .. } => "orbit",
            Command::Cgs { .. } => "cgs",
            Command::Nd { .. } => "nd",
            Command::Mb { .. } => "mb",
            Command::Pohozaev { .. } => "pohozaev",
            Command::Classify { .. } => "classify",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Constants { common, .. }
            | Command::Bubble { common, .. }
            | Command::Shoot { common, .. }
            | Command::Orbit { common, .. }
            | Command::Cgs { common, .. }
            | Command::Nd { common, .. }
            | Command::Mb { common, .. }
            | Command::Pohozaev { common, .. }
            | Command::Classify { common, .. } => common,
        }
    }

    /// Flag values as configuration entries.
    fn overrides(&self) -> Vec<(&'static str, String)> {
        fn put<T: ToString>(v: &mut Vec<(&'static str, String)>, key: &'static str, x: &Option<T>) {
            if let Some(x) = x {
                v.push((key, x.to_string()));
            }
        }
        let c = self.common();
        let mut v = Vec::new();
        put(&mut v, "params.n", &c.n);
        put(&mut v, "params.s", &c.s);
        put(&mut v, "params.mu", &c.mu);
        put(&mut v, "params.q", &c.q);
        put(&mut v, "params.R", &c.radius);
        put(&mut v, "output.dir", &c.out.as_ref().map(|p| p.display().to_string()));
        match self {
            Command::Constants { .. } => {}
            Command::Bubble { eta, rmin, rmax, .. } => {
                put(&mut v, "bubble.eta", eta);
                put(&mut v, "bubble.rmin", rmin);
                put(&mut v, "bubble.rmax", rmax);
            }
            Command::Shoot { gamma, rmax, .. } => {
                put(&mut v, "shoot.gamma", gamma);
                put(&mut v, "shoot.rmax", rmax);
            }
            Command::Orbit { sigma, .. } => put(&mut v, "orbit.sigma", sigma),
            Command::Cgs { sigma, tau_angle, horizon, .. } => {
                put(&mut v, "cgs.sigma", sigma);
                put(&mut v, "cgs.tau_angle", tau_angle);
                put(&mut v, "cgs.horizon", horizon);
            }
            Command::Nd { y20, z30, z30_sweep, .. } => {
                put(&mut v, "nd.y20", y20);
                put(&mut v, "nd.z30", z30);
                put(&mut v, "nd.z30_sweep", z30_sweep);
            }
            Command::Mb { lambda_cap, gamma_end, gamma_ratio, ell, save_members, .. } => {
                put(&mut v, "mb.Lambda", lambda_cap);
                put(&mut v, "mb.gamma_end", gamma_end);
                put(&mut v, "mb.gamma_ratio", gamma_ratio);
                put(&mut v, "mb.ell", ell);
                if *save_members {
                    v.push(("mb.save_members", "true".into()));
                }
            }
            Command::Pohozaev { input, chart, gamma, rmax, .. } => {
                put(&mut v, "pohozaev.input", &input.as_ref().map(|p| p.display().to_string()));
                put(&mut v, "pohozaev.chart", chart);
                put(&mut v, "pohozaev.gamma", gamma);
                put(&mut v, "pohozaev.rmax", rmax);
            }
            Command::Classify { input, chart, .. } => {
                put(&mut v, "classify.input", &input.as_ref().map(|p| p.display().to_string()));
                put(&mut v, "classify.chart", chart);
            }
        }
        v
    }
}

/// Configuration file, then `--set` entries, then dedicated flags.
pub fn build_config(cmd: &Command) -> Result<RunConfig, CliError> {
    let common = cmd.common();
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    for entry in &common.set {
        let (k, v) = entry
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("--set `{entry}`: expected KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    for (k, v) in cmd.overrides() {
        cfg.set(k, &v)?;
    }
    Ok(cfg)
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match build_config(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("radprof {}: {e}", cli.command.name());
            return e.exit_code();
        }
    };
    let mut out = Output::new(&cfg);
    let mut tolerances = json!({});
    let result = commands::run(&cli.command, &cfg, &mut out, &mut tolerances);
    let (status, code) = match &result {
        Ok(Status::Ok) => ("ok", 0),
        Ok(Status::Inconclusive(_)) => ("inconclusive", 4),
        Err(CliError::Validation(_)) => ("invalid_input", 2),
        Err(CliError::Numeric(_)) => ("numeric_failure", 3),
        Err(CliError::Io(_)) => ("write_failure", 1),
    };
    match &result {
        Ok(Status::Inconclusive(why)) => eprintln!("radprof {}: inconclusive: {why}", cli.command.name()),
        Err(e) => eprintln!("radprof {}: {e}", cli.command.name()),
        Ok(Status::Ok) => {}
    }
    if let Err(e) = out.manifest(cli.command.name(), &cfg, &tolerances, status) {
        eprintln!("radprof {}: {e}", cli.command.name());
        return if code == 0 { 1 } else { code };
    }
    code
}
