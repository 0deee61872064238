//! Command implementations. Each submodule owns one subcommand's
//! argument struct and entry point; shared scale conversions and solver
//! dispatch live here.
//!
//! Scale convention: files and noise variances are on the 8-bit [0, 255]
//! scale; the solvers run on [0, 1] where the conventional step sizes
//! and regularizers are calibrated. Conversions happen exactly once on
//! each side of a solve, and quantization only at file export.

pub mod add_noise;
pub mod denoise;
pub mod evaluate;
pub mod gen_image;
pub mod pc_map;
pub mod sweep;

use mpctv_core::image::ImageBuffer;
use mpctv_core::noise::{NoiseKind, NoiseSpec};
use mpctv_core::solver::{
    mpc_tv_denoise, tv_denoise, Method, SolveTrace, SolverConfig, TraceReference,
};

use crate::error::{CliError, Result};

/// 8-bit export scale; solver inputs are divided by this, outputs
/// multiplied back.
pub const EXPORT_SCALE: f64 = 255.0;

pub fn to_unit(img: &ImageBuffer) -> ImageBuffer {
    img.map(|v| v / EXPORT_SCALE)
}

pub fn from_unit(img: &ImageBuffer) -> ImageBuffer {
    img.map(|v| v * EXPORT_SCALE)
}

/// Runs whichever solver the config names.
pub fn solve(
    u0: &ImageBuffer,
    cfg: &SolverConfig,
    reference: Option<TraceReference<'_>>,
) -> Result<(ImageBuffer, SolveTrace)> {
    let out = match cfg.method {
        Method::Tv => tv_denoise(u0, cfg, reference),
        Method::MpcTv => mpc_tv_denoise(u0, cfg, reference),
    };
    out.map_err(Into::into)
}

/// Builds a noise spec from command-line parameters, enforcing the
/// per-family parameter contract as usage errors: gaussian and speckle
/// take a variance, salt-pepper takes exactly one of variance/density.
pub fn build_noise_spec(
    kind: NoiseKind,
    variance: Option<f64>,
    density: Option<f64>,
    seed: u64,
) -> Result<NoiseSpec> {
    let usage = |msg: &str| CliError::Usage(msg.into());
    match kind {
        NoiseKind::Gaussian | NoiseKind::Speckle => {
            if density.is_some() {
                return Err(usage("--density applies to salt-pepper noise only"));
            }
            let v = variance.ok_or_else(|| usage("--variance is required for this noise kind"))?;
            Ok(match kind {
                NoiseKind::Gaussian => NoiseSpec::gaussian(v, seed),
                _ => NoiseSpec::speckle(v, seed),
            })
        }
        NoiseKind::SaltPepper => match (variance, density) {
            (Some(v), None) => Ok(NoiseSpec::salt_pepper_variance(v, seed)),
            (None, Some(d)) => Ok(NoiseSpec::salt_pepper_density(d, seed)),
            _ => Err(usage(
                "salt-pepper noise takes exactly one of --variance / --density",
            )),
        },
    }
}
