//! `ccch`: batch experiments over ccch-core driven by JSON configs.

mod commands;
mod config;
mod output;

use anyhow::Result;
use clap::{Parser, Subcommand};
use config::{load, ConfigError};
use output::Writer;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ccch", version, about = "Scattering, asymptotics and simulation for the complex cubic Camassa-Holm equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config with a `schema: 1` field; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the randomized sweeps of `validate`.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Stationary points, theta'' and eta signs per xi, plus an Im theta sign grid.
    Phase,
    /// Scattering coefficients a, b, r on the real line.
    Scatter,
    /// Zeros of a in the upper half plane with norming constants.
    Spectrum,
    /// Reflectionless solutions sampled in x per time slice.
    Soliton,
    /// Leading-order long-time solution on (xi, t) samples.
    Asym,
    /// Pseudospectral evolution with checkpoint files.
    Simulate,
    /// Runs the acceptance suite and writes the report.
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Phase => "phase",
            Command::Scatter => "scatter",
            Command::Spectrum => "spectrum",
            Command::Soliton => "soliton",
            Command::Asym => "asym",
            Command::Simulate => "simulate",
            Command::Validate => "validate",
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let cfg_path = cli.config.as_deref();
    let base = cfg_path.and_then(Path::parent).unwrap_or(Path::new(".")).to_path_buf();
    let name = cli.command.name();
    log::info!("running {name}");
    match cli.command {
        Command::Phase => {
            let cfg: config::PhaseConfig = load(cfg_path)?;
            commands::phase(&cfg, &mut Writer::new(&cli.out, name, &cfg, None)?)
        }
        Command::Scatter => {
            let cfg: config::ScatterConfig = load(cfg_path)?;
            commands::scatter(&cfg, &mut Writer::new(&cli.out, name, &cfg, None)?)
        }
        Command::Spectrum => {
            let cfg: config::SpectrumConfig = load(cfg_path)?;
            commands::spectrum(&cfg, &mut Writer::new(&cli.out, name, &cfg, None)?)
        }
        Command::Soliton => {
            let cfg: config::SolitonConfig = load(cfg_path)?;
            commands::soliton(&cfg, &mut Writer::new(&cli.out, name, &cfg, None)?)
        }
        Command::Asym => {
            let cfg: config::AsymConfig = load(cfg_path)?;
            commands::asym(&cfg, &base, &mut Writer::new(&cli.out, name, &cfg, None)?)
        }
        Command::Simulate => {
            let cfg: config::SimulateConfig = load(cfg_path)?;
            commands::simulate(&cfg, &mut Writer::new(&cli.out, name, &cfg, None)?)
        }
        Command::Validate => {
            let cfg: config::ValidateConfig = load(cfg_path)?;
            let seed = cli.seed.unwrap_or(ccch_core::validation::SuiteConfig::default().seed);
            let reports = commands::validate(&cfg, Some(seed), &mut Writer::new(&cli.out, name, &cfg, Some(seed))?)?;
            for r in &reports {
                println!("{}", r.summary());
            }
            let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(commands::AcceptanceFailure(failed).into())
            }
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    if err.downcast_ref::<commands::AcceptanceFailure>().is_some() {
        return 4;
    }
    match err.downcast_ref::<ccch_core::Error>() {
        Some(ccch_core::Error::InvalidInput(_)) => 2,
        Some(_) => 3,
        None => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CCCH_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
