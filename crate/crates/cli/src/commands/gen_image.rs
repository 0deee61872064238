//! `mpctv gen-image`: write the built-in synthetic test scene, the
//! substitute for photographic test images this repository cannot ship.

use std::path::PathBuf;

use crate::error::{CliError, Result};
use crate::io::write_gray;
use crate::testimage::phantom;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Output image path (.pgm or .png).
    #[arg(long, short = 'o')]
    pub output: PathBuf,
    /// Side length of the square image.
    #[arg(long, default_value_t = 512)]
    pub size: usize,
}

pub fn run(args: &Args) -> Result<()> {
    if args.size < 32 {
        return Err(CliError::Usage(format!(
            "--size must be at least 32, got {}",
            args.size
        )));
    }
    write_gray(&args.output, &phantom(args.size))
}
