//! `mpctv`: grayscale image denoising toolkit. Exit codes: 0 success,
//! 1 usage error, 2 runtime error.

use clap::Parser;
use mpctv_cli::commands;

#[derive(Parser)]
#[command(
    name = "mpctv",
    version,
    about = "Total-variation and phase-congruency-modulated image denoising",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Add seeded synthetic noise to an image.
    AddNoise(commands::add_noise::Args),
    /// Denoise an image with the TV or MPC-TV solver.
    Denoise(commands::denoise::Args),
    /// Run iteration sweeps over a (method, variance, power) grid.
    Sweep(commands::sweep::Args),
    /// Print quality metrics between an image and a clean reference.
    Evaluate(commands::evaluate::Args),
    /// Emit phase-congruency moment maps and the adjust factor.
    PcMap(commands::pc_map::Args),
    /// Generate the built-in synthetic test image.
    GenImage(commands::gen_image::Args),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version land here too; they are not usage errors.
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };

    let result = match &cli.command {
        Command::AddNoise(args) => commands::add_noise::run(args),
        Command::Denoise(args) => commands::denoise::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::PcMap(args) => commands::pc_map::run(args),
        Command::GenImage(args) => commands::gen_image::run(args),
    };
    if let Err(err) = result {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}
