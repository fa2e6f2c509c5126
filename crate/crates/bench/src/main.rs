use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geogate_bench::{run, Command, ExperimentConfig, RunOptions};

#[derive(Parser)]
#[command(name = "geogate", version, about = "Geometric gate synthesis and simulation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Sample a gate recipe: pulse CSV plus recipe JSON.
    Synthesize(Common),
    /// Gate fidelity against the decoherence rate.
    SweepDecoherence(Common),
    /// Gate fidelity over detuning-drift and amplitude-error grids.
    SweepErrorGrid(Common),
    /// Transmon gate fidelity against the peak Rabi frequency.
    OptimizeOmega(Common),
    /// Transmon populations and fidelities during one gate.
    Dynamics(Common),
    /// √iSWAP-like gate on two parametrically coupled transmons.
    TwoQubit(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    jobs: Option<usize>,
    /// Integrator steps, overriding the config.
    #[arg(long)]
    steps: Option<usize>,
}

impl Sub {
    fn split(self) -> (Command, Common) {
        match self {
            Self::Synthesize(c) => (Command::Synthesize, c),
            Self::SweepDecoherence(c) => (Command::SweepDecoherence, c),
            Self::SweepErrorGrid(c) => (Command::SweepErrorGrid, c),
            Self::OptimizeOmega(c) => (Command::OptimizeOmega, c),
            Self::Dynamics(c) => (Command::Dynamics, c),
            Self::TwoQubit(c) => (Command::TwoQubit, c),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let (command, args) = Cli::parse().command.split();
    let result = ExperimentConfig::load(&args.config).and_then(|config| {
        let outcome = run(command, &config, RunOptions { jobs: args.jobs, steps: args.steps })?;
        for (key, value) in &outcome.report.summary {
            println!("{key} = {value}");
        }
        for path in outcome.write(&args.out)? {
            println!("wrote {}", path.display());
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
