//! `mpctv pc-map`: write the phase-congruency moment fields and the
//! diffusion adjust factor for an image, as 8-bit visualizations plus
//! the raw values in CSV.

use std::path::{Path, PathBuf};

use mpctv_core::image::ImageBuffer;
use mpctv_core::phase_congruency::{adjust_factor, analyze};

use crate::config::{self, Overrides};
use crate::error::Result;
use crate::io::{atomic_write, read_gray, write_gray};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Input image (.pgm or .png).
    #[arg(long, short = 'i')]
    pub input: PathBuf,
    /// Directory for the emitted maps.
    #[arg(long, short = 'd')]
    pub out_dir: PathBuf,
    /// Adjust-factor power m in 1..=5.
    #[arg(long)]
    pub power_m: Option<u32>,
    /// Config file with filter-bank parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

pub fn run(args: &Args) -> Result<()> {
    let mut settings = config::resolve(args.config.as_deref(), &args.overrides)?;
    config::select_method(&mut settings, None, args.power_m)?;
    let img = read_gray(&args.input)?;
    let unit = super::to_unit(&img);

    let pc = analyze(&unit, &settings.solver.pc)?;
    let g = adjust_factor(&pc.m_norm, settings.solver.power_m)?;

    std::fs::create_dir_all(&args.out_dir)?;
    write_gray(&args.out_dir.join("moment.pgm"), &rescale_minmax(&pc.m))?;
    write_gray(
        &args.out_dir.join("moment_norm.pgm"),
        &super::from_unit(&pc.m_norm),
    )?;
    write_gray(&args.out_dir.join("adjust.pgm"), &super::from_unit(&g))?;
    write_values_csv(&args.out_dir.join("pc_values.csv"), &pc.m, &pc.m_norm, &g)?;
    Ok(())
}

/// Linear min-max rescale to [0, 255]; a constant field maps to 0.
fn rescale_minmax(m: &ImageBuffer) -> ImageBuffer {
    let (lo, hi) = (m.min(), m.max());
    if hi > lo {
        m.map(|v| (v - lo) / (hi - lo) * 255.0)
    } else {
        m.map(|_| 0.0)
    }
}

fn write_values_csv(
    path: &Path,
    m: &ImageBuffer,
    m_norm: &ImageBuffer,
    g: &ImageBuffer,
) -> Result<()> {
    let mut text = String::from("x,y,moment,moment_norm,adjust\n");
    for y in 0..m.height() {
        for x in 0..m.width() {
            text.push_str(&format!(
                "{x},{y},{},{},{}\n",
                m.get(x, y),
                m_norm.get(x, y),
                g.get(x, y)
            ));
        }
    }
    atomic_write(path, text.as_bytes())
}
