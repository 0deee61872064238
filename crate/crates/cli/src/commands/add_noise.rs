//! `mpctv add-noise`: synthesize noise onto an image and record the
//! parameters in a sidecar file.

use std::path::PathBuf;

use mpctv_core::noise::{apply, NoiseKind};

use crate::config::{self, Overrides};
use crate::error::Result;
use crate::io::{atomic_write, read_gray, write_gray};
use crate::plan::kind_name;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Clean input image (.pgm or .png).
    #[arg(long, short = 'i')]
    pub input: PathBuf,
    /// Noised output image path.
    #[arg(long, short = 'o')]
    pub output: PathBuf,
    /// Noise family: gaussian, speckle, or salt-pepper.
    #[arg(long, short = 'k')]
    pub kind: NoiseKind,
    /// Target variance of (noised - clean) in [0, 255]^2 intensity units.
    #[arg(long)]
    pub variance: Option<f64>,
    /// Fraction of corrupted pixels (salt-pepper only).
    #[arg(long)]
    pub density: Option<f64>,
    /// Config file supplying defaults (only `seed` is relevant here).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

pub fn run(args: &Args) -> Result<()> {
    let settings = config::resolve(args.config.as_deref(), &args.overrides)?;
    let spec = super::build_noise_spec(args.kind, args.variance, args.density, settings.seed)?;

    let clean = read_gray(&args.input)?;
    let noised = apply(&clean, &spec)?;
    write_gray(&args.output, &noised)?;
    write_sidecar(args, settings.seed)?;
    Ok(())
}

/// Records the requested noise parameters next to the output image so a
/// run can be reproduced from its artifacts alone.
fn write_sidecar(args: &Args, seed: u64) -> Result<()> {
    let mut text = format!("kind={}\n", kind_name(args.kind));
    if let Some(v) = args.variance {
        text.push_str(&format!("variance={v}\n"));
    }
    if let Some(d) = args.density {
        text.push_str(&format!("density={d}\n"));
    }
    text.push_str(&format!("seed={seed}\n"));

    let mut sidecar = args.output.clone().into_os_string();
    sidecar.push(".noise.txt");
    atomic_write(&PathBuf::from(sidecar), text.as_bytes())
}
