use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parafermion_cli::{run, Experiment, ExperimentConfig, Format, DEFAULT_GRID_STEP, DEFAULT_SHOTS};

/// Z₃ parafermion braiding, contextuality and tomography experiments.
#[derive(Parser, Debug)]
#[command(name = "pfsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for simulated counts; required by braid, noise, kcbs and tomo.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Shots per measurement setting.
    #[arg(long, global = true, default_value_t = DEFAULT_SHOTS)]
    shots: u64,

    /// Step of the noise-probability grid on [0, 1].
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_STEP)]
    grid_step: f64,

    /// Bootstrap resamples for error bars.
    #[arg(long, global = true, default_value_t = parafermion::tomography::DEFAULT_RESAMPLES)]
    resamples: usize,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Braid the nine sample states; phases, leakage and the braid χ.
    Braid,
    /// M and K surfaces under T∘Σ and X^S∘Z^S, plus line cuts.
    Noise,
    /// KCBS values and the orthogonality table.
    Kcbs,
    /// Nine-witness tables before and after braiding.
    Witness,
    /// Process tomography of the dense braid gate.
    Tomo,
    /// Wave-plate settings for P₁, R₂ and P₃.
    Compile,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Braid => Experiment::Braid,
            Command::Noise => Experiment::Noise,
            Command::Kcbs => Experiment::Kcbs,
            Command::Witness => Experiment::Witness,
            Command::Tomo => Experiment::Tomo,
            Command::Compile => Experiment::Compile,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = ExperimentConfig {
        experiment: cli.command.into(),
        seed: cli.seed,
        shots: cli.shots,
        grid_step: cli.grid_step,
        resamples: cli.resamples,
        out: cli.out,
        format: cli.format,
    };
    match run(&config) {
        Ok(files) => {
            for f in &files {
                println!("{}", config.out.join(&f.name).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pfsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
