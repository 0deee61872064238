//! Sweep experiment plans: the full grid of (method, noise variance,
//! adjust power) combinations to run against one clean reference image.

use std::path::PathBuf;

use mpctv_core::noise::NoiseKind;
use mpctv_core::solver::Method;

use crate::config::RunSettings;
use crate::error::{CliError, Result};

/// One sweep invocation: a clean image, a noise family with one or more
/// variances, one or more solver methods, the adjust powers to try for
/// the PC-modulated method, and the iteration range to trace.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub clean_path: PathBuf,
    pub out_dir: PathBuf,
    pub noise_kind: NoiseKind,
    pub variances: Vec<f64>,
    pub methods: Vec<Method>,
    pub power_ms: Vec<u32>,
    /// Inclusive 1-based iteration range; rows outside it are not emitted.
    pub iter_lo: usize,
    pub iter_hi: usize,
    pub settings: RunSettings,
    pub workers: usize,
    pub plot: bool,
}

/// A single (method, variance, power) cell of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combination {
    pub method: Method,
    pub variance: f64,
    /// Present only for the PC-modulated method.
    pub power_m: Option<u32>,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.iter_lo < 1 || self.iter_lo > self.iter_hi {
            return usage(format!(
                "empty iteration range {}..={}",
                self.iter_lo, self.iter_hi
            ));
        }
        if self.variances.is_empty() {
            return usage("no noise variances given".into());
        }
        for &v in &self.variances {
            if !(v >= 0.0) || !v.is_finite() {
                return usage(format!("noise variance must be finite and >= 0, got {v}"));
            }
        }
        if self.methods.is_empty() {
            return usage("no methods given".into());
        }
        if self.power_ms.is_empty() {
            return usage("no adjust powers given".into());
        }
        for &m in &self.power_ms {
            if !(1..=5).contains(&m) {
                return usage(format!("adjust power must be in 1..=5, got {m}"));
            }
        }
        if self.workers < 1 {
            return usage("worker count must be >= 1".into());
        }
        if !self.clean_path.exists() {
            return usage(format!(
                "clean reference {} does not exist",
                self.clean_path.display()
            ));
        }
        Ok(())
    }

    /// The grid cells in deterministic emission order: variance-major,
    /// then method, then power (powers apply to the PC method only).
    pub fn combinations(&self) -> Vec<Combination> {
        let mut combos = Vec::new();
        for &variance in &self.variances {
            for &method in &self.methods {
                match method {
                    Method::Tv => combos.push(Combination {
                        method,
                        variance,
                        power_m: None,
                    }),
                    Method::MpcTv => {
                        for &m in &self.power_ms {
                            combos.push(Combination {
                                method,
                                variance,
                                power_m: Some(m),
                            });
                        }
                    }
                }
            }
        }
        combos
    }
}

impl Combination {
    /// File stem for this cell's CSV/plot, e.g. `sweep_mpc-tv_gaussian_v300_m2`.
    pub fn file_stem(&self, kind: NoiseKind) -> String {
        let mut stem = format!(
            "sweep_{}_{}_v{}",
            self.method.name(),
            kind_name(kind),
            self.variance
        );
        if let Some(m) = self.power_m {
            stem.push_str(&format!("_m{m}"));
        }
        stem
    }
}

pub fn kind_name(kind: NoiseKind) -> &'static str {
    match kind {
        NoiseKind::Gaussian => "gaussian",
        NoiseKind::Speckle => "speckle",
        NoiseKind::SaltPepper => "salt-pepper",
    }
}
