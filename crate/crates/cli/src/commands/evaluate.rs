//! `mpctv evaluate`: print quality metrics between two images as
//! key=value lines.

use std::path::PathBuf;

use mpctv_core::metrics::{mssim, mssim_plain, snr_centered_db, snr_db};

use crate::error::Result;
use crate::io::read_gray;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Image under evaluation (.pgm or .png).
    #[arg(long, short = 'i')]
    pub image: PathBuf,
    /// Clean reference image.
    #[arg(long, short = 'c')]
    pub clean: PathBuf,
}

pub fn run(args: &Args) -> Result<()> {
    let image = read_gray(&args.image)?;
    let clean = read_gray(&args.clean)?;

    let snr = snr_db(&image, &clean)?;
    let snr_centered = snr_centered_db(&image, &clean)?;
    let mssim_sq = mssim(&image, &clean)?;
    let mssim_mean = mssim_plain(&image, &clean, super::EXPORT_SCALE)?;

    println!("snr_db={snr}");
    println!("snr_centered_db={snr_centered}");
    println!("mssim={mssim_sq}");
    println!("mssim_plain={mssim_mean}");
    Ok(())
}
