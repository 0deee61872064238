//! `mpctv sweep`: run iteration sweeps over a grid of (method, noise
//! variance, adjust power) combinations against one clean image, tracing
//! per-iteration SNR/MSSIM/energy into one CSV per combination plus a
//! summary CSV of each combination's best iteration.

use std::path::PathBuf;

use mpctv_core::image::ImageBuffer;
use mpctv_core::noise::{apply, NoiseKind};
use mpctv_core::solver::{TraceReference, TraceRow};
use rayon::prelude::*;

use crate::config::{self, Overrides};
use crate::error::{CliError, Result};
use crate::io::atomic_write;
use crate::plan::{kind_name, Combination, ExperimentPlan};
use crate::{io, plot};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Clean reference image the sweep noises and denoises (.pgm/.png).
    #[arg(long, short = 'c')]
    pub clean: PathBuf,
    /// Directory receiving the CSV (and plot) outputs.
    #[arg(long, short = 'd')]
    pub out_dir: PathBuf,
    /// Noise family applied to the clean image.
    #[arg(long, short = 'k', default_value = "gaussian")]
    pub noise: NoiseKind,
    /// Noise variance grid (repeat the flag or comma-separate).
    #[arg(long, short = 'v', value_delimiter = ',', required = true)]
    pub variance: Vec<f64>,
    /// Methods to sweep (comma-separated: tv, mpc-tv).
    #[arg(long, value_delimiter = ',', default_value = "tv,mpc-tv")]
    pub method: Vec<String>,
    /// Adjust powers for the PC-modulated method.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub power_m: Vec<u32>,
    /// Iteration range to trace, as `LO:HI` or a bare upper bound.
    #[arg(long, default_value = "1:35")]
    pub iter_range: String,
    /// Concurrent combination workers.
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    /// Also render an SNR-vs-iteration line plot next to each CSV.
    #[arg(long)]
    pub plot: bool,
    /// Config file with solver parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Everything one combination produced: the emitted rows plus the
/// summary statistics, returned so tests can inspect sweeps in-process.
#[derive(Debug, Clone)]
pub struct CombinationResult {
    pub combination: Combination,
    pub rows: Vec<TraceRow>,
    pub best_iteration: usize,
    pub highest_snr: f64,
    pub csv_path: PathBuf,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub results: Vec<CombinationResult>,
    pub summary_path: PathBuf,
}

pub fn run(args: &Args) -> Result<()> {
    into_plan(args).and_then(|plan| execute(&plan)).map(|_| ())
}

pub fn into_plan(args: &Args) -> Result<ExperimentPlan> {
    let settings = config::resolve(args.config.as_deref(), &args.overrides)?;
    let (iter_lo, iter_hi) = parse_iter_range(&args.iter_range)?;
    let methods = args
        .method
        .iter()
        .map(|m| config::parse_method(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentPlan {
        clean_path: args.clean.clone(),
        out_dir: args.out_dir.clone(),
        noise_kind: args.noise,
        variances: args.variance.clone(),
        methods,
        power_ms: args.power_m.clone(),
        iter_lo,
        iter_hi,
        settings,
        workers: args.workers,
        plot: args.plot,
    })
}

/// Runs the whole plan: every combination concurrently (bounded by the
/// worker count), then the summary CSV.
pub fn execute(plan: &ExperimentPlan) -> Result<SweepOutcome> {
    plan.validate()?;
    let clean = io::read_gray(&plan.clean_path)?;
    std::fs::create_dir_all(&plan.out_dir)?;

    let combos = plan.combinations();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers.min(combos.len()))
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start worker pool: {e}")))?;
    let results = pool.install(|| {
        combos
            .par_iter()
            .map(|combo| run_combination(plan, &clean, *combo))
            .collect::<Result<Vec<_>>>()
    })?;

    let summary_path = plan.out_dir.join("summary.csv");
    write_summary(&summary_path, plan.noise_kind, &results)?;
    Ok(SweepOutcome {
        results,
        summary_path,
    })
}

/// Noises the clean image, traces a full solve, and emits the CSV rows
/// for the plan's iteration range.
///
/// The noised image depends only on (kind, variance, seed), so every
/// method/power cell at the same variance denoises the identical input.
fn run_combination(
    plan: &ExperimentPlan,
    clean: &ImageBuffer,
    combo: Combination,
) -> Result<CombinationResult> {
    let spec = super::build_noise_spec(plan.noise_kind, Some(combo.variance), None, plan.settings.seed)?;
    let noised = apply(clean, &spec)?;

    let u0 = super::to_unit(&noised);
    let clean_unit = super::to_unit(clean);
    let mut cfg = plan.settings.solver.clone();
    cfg.method = combo.method;
    cfg.iterations = plan.iter_hi;
    cfg.trace = true;
    if let Some(m) = combo.power_m {
        cfg.power_m = m;
    }
    let reference = TraceReference {
        clean: &clean_unit,
        dynamic_range: 1.0,
    };
    let (_, trace) = super::solve(&u0, &cfg, Some(reference))?;

    let rows: Vec<TraceRow> = trace
        .rows
        .into_iter()
        .filter(|r| r.iteration >= plan.iter_lo)
        .collect();
    let (best_iteration, highest_snr) = best_of(&rows)?;

    let csv_path = plan
        .out_dir
        .join(format!("{}.csv", combo.file_stem(plan.noise_kind)));
    atomic_write(&csv_path, render_rows(&rows).as_bytes())?;
    if plan.plot {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| r.snr_db.map(|s| (r.iteration as f64, s)))
            .collect();
        plot::render_line(&csv_path.with_extension("png"), &points)?;
    }

    Ok(CombinationResult {
        combination: combo,
        rows,
        best_iteration,
        highest_snr,
        csv_path,
    })
}

/// Highest-SNR row; earlier iteration wins ties.
fn best_of(rows: &[TraceRow]) -> Result<(usize, f64)> {
    rows.iter()
        .filter_map(|r| r.snr_db.map(|s| (r.iteration, s)))
        .fold(None, |best: Option<(usize, f64)>, (n, s)| match best {
            Some((_, bs)) if bs >= s => best,
            _ => Some((n, s)),
        })
        .ok_or_else(|| CliError::Runtime("sweep produced no defined SNR values".into()))
}

fn render_rows(rows: &[TraceRow]) -> String {
    let mut text = String::from("iteration,snr_db,mssim,energy\n");
    for r in rows {
        let snr = r.snr_db.map(|v| v.to_string()).unwrap_or_default();
        let mssim = r.mssim.map(|v| v.to_string()).unwrap_or_default();
        text.push_str(&format!("{},{},{},{}\n", r.iteration, snr, mssim, r.energy));
    }
    text
}

fn write_summary(path: &PathBuf, kind: NoiseKind, results: &[CombinationResult]) -> Result<()> {
    let mut text = String::from("method,noise_kind,variance,power_m,best_iteration,highest_snr\n");
    for r in results {
        let power = r
            .combination
            .power_m
            .map(|m| m.to_string())
            .unwrap_or_default();
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.combination.method.name(),
            kind_name(kind),
            r.combination.variance,
            power,
            r.best_iteration,
            r.highest_snr
        ));
    }
    atomic_write(path, text.as_bytes())
}

/// Parses `LO:HI` (or a bare `HI`, meaning `1:HI`) into the inclusive
/// iteration range.
fn parse_iter_range(text: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Usage(format!("--iter-range expects LO:HI or HI, got '{text}'"));
    match text.split_once(':') {
        Some((lo, hi)) => Ok((
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok((1, text.trim().parse().map_err(|_| bad())?)),
    }
}
