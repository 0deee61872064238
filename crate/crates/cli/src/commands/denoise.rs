//! `mpctv denoise`: run one solver configuration on an image and write
//! the result, optionally reporting quality metrics against a clean
//! reference.

use std::path::PathBuf;

use mpctv_core::metrics::{mssim_with_range, snr_db};

use crate::config::{self, Overrides};
use crate::error::Result;
use crate::io::{read_gray, write_gray};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Noisy input image (.pgm or .png).
    #[arg(long, short = 'i')]
    pub input: PathBuf,
    /// Denoised output image path.
    #[arg(long, short = 'o')]
    pub output: PathBuf,
    /// Clean reference; when given, SNR and MSSIM of the result are
    /// printed as key=value lines.
    #[arg(long)]
    pub clean: Option<PathBuf>,
    /// Solver method: tv or mpc-tv.
    #[arg(long)]
    pub method: Option<String>,
    /// Adjust-factor power m in 1..=5.
    #[arg(long)]
    pub power_m: Option<u32>,
    /// Config file with solver parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

pub fn run(args: &Args) -> Result<()> {
    let mut settings = config::resolve(args.config.as_deref(), &args.overrides)?;
    config::select_method(&mut settings, args.method.as_deref(), args.power_m)?;

    let noisy = read_gray(&args.input)?;
    let u0 = super::to_unit(&noisy);
    let (result, _trace) = super::solve(&u0, &settings.solver, None)?;
    let restored = super::from_unit(&result);
    write_gray(&args.output, &restored)?;

    if let Some(clean_path) = &args.clean {
        let clean = read_gray(clean_path)?;
        // Metrics are taken on the real-valued result, before export
        // quantization, in the 8-bit scale of the reference.
        let snr = snr_db(&restored, &clean)?;
        let mssim = mssim_with_range(&restored, &clean, super::EXPORT_SCALE)?;
        println!("snr_db={snr}");
        println!("mssim={mssim}");
    }
    Ok(())
}
