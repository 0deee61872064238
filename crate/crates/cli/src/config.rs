//! Flat key=value configuration files plus command-line overrides.
//!
//! Recognized keys: `dt`, `lambda`, `eps0`, `iterations`, `power_m`,
//! `method`, `orientation_count`, `scale_count`, `min_wavelength`,
//! `scale_multiplier`, `sigma_on_f`, `noise_threshold_k`, `seed`.
//! Unknown keys are usage errors. Values given as command-line flags
//! take precedence over file values, which take precedence over the
//! built-in defaults.

use std::fs;
use std::path::Path;

use mpctv_core::solver::{Method, SolverConfig};

use crate::error::{CliError, Result};

pub const DEFAULT_SEED: u64 = 42;

/// Solver configuration plus the reproducibility seed, the two pieces of
/// state every command shares.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub solver: SolverConfig,
    pub seed: u64,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            seed: DEFAULT_SEED,
        }
    }
}

/// Command-line override set; `None` means the flag was not given.
/// Field names mirror the config-file keys exactly.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Explicit-Euler time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Fidelity weight of the TV energy.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Base gradient regularizer.
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Iteration count.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Number of filter orientations.
    #[arg(long)]
    pub orientation_count: Option<usize>,
    /// Number of filter scales per orientation.
    #[arg(long)]
    pub scale_count: Option<usize>,
    /// Smallest filter wavelength in pixels.
    #[arg(long)]
    pub min_wavelength: Option<f64>,
    /// Wavelength ratio between successive scales.
    #[arg(long)]
    pub scale_multiplier: Option<f64>,
    /// Log-Gabor bandwidth parameter.
    #[arg(long)]
    pub sigma_on_f: Option<f64>,
    /// Noise compensation threshold in standard deviations.
    #[arg(long)]
    pub noise_threshold_k: Option<f64>,
    /// Reproducibility seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Builds the effective settings: defaults, then the config file (if
/// given), then command-line overrides. The result is validated; any
/// violation is reported as a usage error naming the offending field.
pub fn resolve(config_path: Option<&Path>, overrides: &Overrides) -> Result<RunSettings> {
    let mut settings = RunSettings::default();
    if let Some(path) = config_path {
        apply_file(&mut settings, path)?;
    }
    apply_overrides(&mut settings, overrides)?;
    settings
        .solver
        .validate()
        .map_err(CliError::usage_from)?;
    Ok(settings)
}

fn apply_overrides(settings: &mut RunSettings, o: &Overrides) -> Result<()> {
    let s = &mut settings.solver;
    if let Some(v) = o.dt {
        s.dt = v;
    }
    if let Some(v) = o.lambda {
        s.lambda = v;
    }
    if let Some(v) = o.eps0 {
        s.eps0 = v;
    }
    if let Some(v) = o.iterations {
        s.iterations = v;
    }
    if let Some(v) = o.orientation_count {
        s.pc.orientation_count = v;
    }
    if let Some(v) = o.scale_count {
        s.pc.scale_count = v;
    }
    if let Some(v) = o.min_wavelength {
        s.pc.min_wavelength = v;
    }
    if let Some(v) = o.scale_multiplier {
        s.pc.scale_multiplier = v;
    }
    if let Some(v) = o.sigma_on_f {
        s.pc.sigma_on_f = v;
    }
    if let Some(v) = o.noise_threshold_k {
        s.pc.noise_threshold_k = v;
    }
    if let Some(v) = o.seed {
        settings.seed = v;
    }
    Ok(())
}

fn apply_file(settings: &mut RunSettings, path: &Path) -> Result<()> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        apply_key(settings, key.trim(), value.trim()).map_err(|e| match e {
            CliError::Usage(msg) => {
                CliError::Usage(format!("{}:{}: {msg}", path.display(), lineno + 1))
            }
            other => other,
        })?;
    }
    Ok(())
}

fn apply_key(settings: &mut RunSettings, key: &str, value: &str) -> Result<()> {
    let s = &mut settings.solver;
    match key {
        "dt" => s.dt = parse_num(key, value)?,
        "lambda" => s.lambda = parse_num(key, value)?,
        "eps0" => s.eps0 = parse_num(key, value)?,
        "iterations" => s.iterations = parse_num(key, value)?,
        "power_m" => s.power_m = parse_num(key, value)?,
        "method" => s.method = parse_method(value)?,
        "orientation_count" => s.pc.orientation_count = parse_num(key, value)?,
        "scale_count" => s.pc.scale_count = parse_num(key, value)?,
        "min_wavelength" => s.pc.min_wavelength = parse_num(key, value)?,
        "scale_multiplier" => s.pc.scale_multiplier = parse_num(key, value)?,
        "sigma_on_f" => s.pc.sigma_on_f = parse_num(key, value)?,
        "noise_threshold_k" => s.pc.noise_threshold_k = parse_num(key, value)?,
        "seed" => settings.seed = parse_num(key, value)?,
        other => {
            return Err(CliError::Usage(format!("unknown config key '{other}'")));
        }
    }
    Ok(())
}

/// Applies a command's own method/power flags on top of resolved
/// settings and re-validates. These two live outside [`Overrides`]
/// because the sweep command owns grid-valued flags of the same names.
pub fn select_method(
    settings: &mut RunSettings,
    method: Option<&str>,
    power_m: Option<u32>,
) -> Result<()> {
    if let Some(m) = method {
        settings.solver.method = parse_method(m)?;
    }
    if let Some(p) = power_m {
        settings.solver.power_m = p;
    }
    settings.solver.validate().map_err(CliError::usage_from)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        CliError::Usage(format!("config key '{key}': cannot parse value '{value}'"))
    })
}

pub fn parse_method(value: &str) -> Result<Method> {
    value.parse().map_err(CliError::Usage)
}
